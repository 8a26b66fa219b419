#pragma once

// Constant-composition codes and their random ensembles.

#include <cstdint>
#include <vector>

#include "relexp/core/types.hpp"

namespace relexp::ensemble {

struct P2PCode {
    int n = 0;
    int nx = 0;
    std::vector<int> composition;  // symbol counts, sums to n
    std::vector<Sequence> words;   // repeats allowed

    int size() const { return static_cast<int>(words.size()); }
};

// Two-user code sharing the time-sharing word u. Conditional compositions
// are count tables over (u, x) and (u, y).
struct MacCode {
    int n = 0;
    int nu = 0, nx = 0, ny = 0;
    Sequence u;
    std::vector<int> counts_ux, counts_uy;
    std::vector<Sequence> cx, cy;

    int mx() const { return static_cast<int>(cx.size()); }
    int my() const { return static_cast<int>(cy.size()); }
};

// Independent generator for draw `index` of a run seeded with `seed`, so
// results do not depend on how draws are scheduled.
Rng split_rng(std::uint64_t seed, std::uint64_t index);

// M words drawn independently and uniformly from the type class.
P2PCode sample_p2p_code(const std::vector<int>& composition, int m, Rng& rng);

// u drawn uniformly from its type class (the u-marginal of counts_ux), then
// every codeword drawn uniformly from its conditional type class given u.
MacCode sample_mac_code(int nu, int nx, int ny, const std::vector<int>& counts_ux, const std::vector<int>& counts_uy,
                        int mx, int my, Rng& rng);

// Throw InputError unless every word has the declared (conditional) composition.
void check_code(const P2PCode& c);
void check_code(const MacCode& c);

// Counts of a (U, X, Y) distribution at length n split into the (U, X) and
// (U, Y) tables. Throws unless both are exact types.
struct MacComposition {
    std::vector<int> counts_ux, counts_uy;
};
MacComposition mac_composition(const Joint& p_uxy, int n);

}  // namespace relexp::ensemble
