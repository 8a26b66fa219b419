#pragma once

// Removal of codewords with large packing scores, and exhaustive re-checks
// of the per-codeword caps the removal is meant to deliver.

#include <vector>

#include "relexp/ensemble/packing.hpp"

namespace relexp::ensemble {

struct CapCheck {
    bool pass = true;
    // max over every checked count of log2(count) - log2(cap); negative when all pass
    double worst_margin = -kInf;
    long long checked = 0;  // (codeword or pair, type) combinations with a nonzero count
};

struct P2PExpurgation {
    P2PCode code;
    std::vector<int> kept;       // indices into the input code
    std::vector<double> scores;  // per input codeword
    double mean_score = 0;       // Pi of the input; below 1/2 guarantees half survive
    bool half_kept = false;
    CapCheck per_codeword;  // |T_{V_{X~|X}}(x_i) ∩ C| <= 2^{n(R - I(X;X~) + 3 delta)}
    CapCheck average;       // pi(C, V) against the same cap
};

// Score of x_i: sum over j != i of 2^{-n(R - I(X;X~) + 3 delta)} at the joint
// type of (x_i, x_j). Codewords scoring below 1 are kept.
P2PExpurgation expurgate_p2p(const P2PCode& c, double rate, double delta);
std::vector<double> p2p_scores(const P2PCode& c, double rate, double delta);
CapCheck check_p2p_per_codeword(const P2PCode& c, double rate, double delta, double multiple = 3);
CapCheck check_p2p_average(const P2PCode& c, double rate, double delta, double multiple = 3);

// F_w of a first-order joint type (axes as in first_order_dims).
double f_value(Which w, const std::vector<int>& counts, const std::vector<int>& dims, double rx, double ry);

struct MacExpurgation {
    MacCode code;
    std::vector<int> kept_x, kept_y;
    std::vector<double> g, h;  // scores of the input's x and y codewords
    double mean_score = 0;     // Pi of the input
    bool half_kept_x = false, half_kept_y = false;
    // Per pair: L_w(i,j) <= 2^{-n[F_w - min(R_X,R_Y) - 6 delta]}, all w and V.
    CapCheck per_pair;
    // N_w(C*, V) <= factor * 2^{-n[F_w - 6 delta]} with factor = min(M_X/M*_X, M_Y/M*_Y).
    CapCheck average;
    double average_factor = 1;
};

// G(i) averages over j and sums over w and V the terms L_w(i,j,V) 2^{n[F_w(V) - 6 delta]};
// H(j) averages the same terms over i. Both are computed on the input code;
// x-words with G < 1 and y-words with H < 1 are kept.
MacExpurgation expurgate_mac(const MacCode& c, double rx, double ry, double delta);
CapCheck check_mac_per_pair(const MacCode& c, double rx, double ry, double delta);
CapCheck check_mac_average(const MacCode& c, double rx, double ry, double delta, double factor);

inline constexpr Which kFirstOrder[] = {Which::U, Which::X, Which::Y, Which::XY};

}  // namespace relexp::ensemble
