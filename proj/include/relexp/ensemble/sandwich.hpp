#pragma once

// Upper and lower bounds on a code's error probability computed only from its
// packing functions, set against the exhaustively computed error.
//
// The sums run over joint types V of (X, X~, Y) in P_n^r: both input marginals
// equal the composition and alpha(V_{X~Y}) <= alpha(V_{XY}). For such V,
//   B = pi(V_{XX~}) |T_{V_{Y|XX~}}|                          (pairs times shell size)
//   C = sum over V' of (X, X~, X^, Y) with V'_{XX~Y} = V'_{XX^Y} = V
//         lambda(V'_{XX~X^}) |T_{V'_{Y|XX~X^}}|
// are the averaged counts behind the inclusion-exclusion bracket B - C <= A <= B.

#include <vector>

#include "relexp/ensemble/error_prob.hpp"
#include "relexp/ensemble/packing.hpp"

namespace relexp::ensemble {

struct SandwichTerm {
    std::vector<int> v;  // counts over (X, X~, Y)
    double weight = 0;   // W^n(y | x) for y in the shell: 2^{-n[D + H(Y|X)]}
    double pi = 0;
    double b = 0;        // average B_i
    double c = 0;        // average C_i
};

struct SandwichReport {
    double exact = 0;
    // sum_V 2^{-nD} min{2^{-n I(X~;Y|X)} pi, 1}
    double upper = 0;
    // sum over V_{XY} of 2^{-n[D + H(Y|X)]} max over V extending it of |B - C|^+
    double lower = 0;
    // sum_V 2^{-n[D + I(X~;Y|X) + delta]} |pi - sum_V' 2^{-n I(X^;Y|XX~)} lambda|^+
    double lower_delta_form = 0;
    bool pass = false;  // lower <= exact <= upper up to rounding
    std::vector<SandwichTerm> terms;
};

SandwichReport sandwich_p2p(const P2PCode& c, const Joint& w, Metric m, double delta, const ErrorOptions& opt = {});

}  // namespace relexp::ensemble
