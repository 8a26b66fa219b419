#pragma once

// Packing functions: averaged counts of codeword pairs and triples sharing a
// joint type. All values are exact ratios of integers.

#include <cstdint>
#include <map>
#include <vector>

#include "relexp/ensemble/code.hpp"

namespace relexp::ensemble {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
};

// Joint type (as a count table) -> number of index tuples with that type.
using TypeTally = std::map<std::vector<int>, std::int64_t>;

// Ordered pairs (i, j), j != i, over axes (X, X~).
TypeTally pair_tally(const P2PCode& c);
// Ordered triples of distinct indices (i, j, k) over axes (X, X~, X^).
TypeTally triple_tally(const P2PCode& c);
// Pairs (i, j) with j != i for one fixed i: |T_{V_{X~|X}}(x_i) ∩ C| per V.
TypeTally neighbour_tally(const P2PCode& c, int i);

// (1/M) sum_i sum_{j != i} 1[(x_i, x_j) in T_V]
Rational packing_pi(const P2PCode& c, const std::vector<int>& v_counts);
// (1/M) sum over ordered distinct triples of 1[(x_i, x_j, x_k) in T_V]
Rational packing_lambda(const P2PCode& c, const std::vector<int>& v_counts);

enum class Which { U, X, Y, XY };

// Axes of first-order types:  U: (U,X,Y)  X: (U,X,Y,X~)  Y: (U,X,Y,Y~)  XY: (U,X,Y,X~,Y~)
std::vector<int> first_order_dims(const MacCode& c, Which w);
// Axes of second-order types: X: (U,X,Y,X~,X^)  Y: (U,X,Y,Y~,Y^)  XY: (U,X,Y,X~,Y~,X^,Y^)
std::vector<int> second_order_dims(const MacCode& c, Which w);

// Index tuples behind N_w summed over all (i, j); divide by M_X M_Y for N_w.
TypeTally first_order_tally(const MacCode& c, Which w);
// Index tuples behind Lambda_w; w must be X, Y or XY.
TypeTally second_order_tally(const MacCode& c, Which w);
// The per-pair counts L_w(i, j): tuples with message pair (i, j) fixed.
TypeTally pair_counts(const MacCode& c, Which w, int i, int j);
// Same, with the competing words restricted to the listed indices.
TypeTally pair_counts(const MacCode& c, Which w, int i, int j, const std::vector<int>& xs, const std::vector<int>& ys);

Rational packing_n(const MacCode& c, const std::vector<int>& v_counts, Which w);
Rational packing_lambda(const MacCode& c, const std::vector<int>& v_counts, Which w);

}  // namespace relexp::ensemble
