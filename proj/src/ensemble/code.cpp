#include "relexp/ensemble/code.hpp"

#include <numeric>

namespace relexp::ensemble {

Rng split_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
    return Rng(seq);
}

P2PCode sample_p2p_code(const std::vector<int>& composition, int m, Rng& rng) {
    if (m < 1) throw InputError("a code needs at least one word");
    P2PCode c;
    c.n = std::accumulate(composition.begin(), composition.end(), 0);
    c.nx = static_cast<int>(composition.size());
    c.composition = composition;
    for (int i = 0; i < m; ++i) c.words.push_back(random_sequence(composition, rng));
    return c;
}

namespace {

std::vector<int> row_sums(const std::vector<int>& table, int rows, int width) {
    if (static_cast<int>(table.size()) != rows * width) throw InputError("count table has the wrong size");
    std::vector<int> s(static_cast<std::size_t>(rows), 0);
    for (int r = 0; r < rows; ++r)
        for (int k = 0; k < width; ++k) s[static_cast<std::size_t>(r)] += table[static_cast<std::size_t>(r * width + k)];
    return s;
}

}  // namespace

MacCode sample_mac_code(int nu, int nx, int ny, const std::vector<int>& counts_ux, const std::vector<int>& counts_uy,
                        int mx, int my, Rng& rng) {
    if (mx < 1 || my < 1) throw InputError("each codebook needs at least one word");
    std::vector<int> pu = row_sums(counts_ux, nu, nx);
    if (row_sums(counts_uy, nu, ny) != pu) throw InputError("(U,X) and (U,Y) counts disagree on U");
    MacCode c;
    c.n = std::accumulate(pu.begin(), pu.end(), 0);
    c.nu = nu;
    c.nx = nx;
    c.ny = ny;
    c.counts_ux = counts_ux;
    c.counts_uy = counts_uy;
    c.u = random_sequence(pu, rng);
    for (int i = 0; i < mx; ++i) c.cx.push_back(random_conditional_sequence(c.u, counts_ux, nx, rng));
    for (int j = 0; j < my; ++j) c.cy.push_back(random_conditional_sequence(c.u, counts_uy, ny, rng));
    return c;
}

void check_code(const P2PCode& c) {
    for (const Sequence& w : c.words) {
        if (static_cast<int>(w.size()) != c.n) throw InputError("codeword length differs from n");
        if (joint_counts({&w}, {c.nx}) != c.composition) throw InputError("codeword outside the type class");
    }
}

void check_code(const MacCode& c) {
    if (static_cast<int>(c.u.size()) != c.n) throw InputError("u has the wrong length");
    for (const Sequence& x : c.cx) {
        if (x.size() != c.u.size()) throw InputError("x codeword length differs from n");
        if (joint_counts({&c.u, &x}, {c.nu, c.nx}) != c.counts_ux) throw InputError("x codeword outside its conditional type class");
    }
    for (const Sequence& y : c.cy) {
        if (y.size() != c.u.size()) throw InputError("y codeword length differs from n");
        if (joint_counts({&c.u, &y}, {c.nu, c.ny}) != c.counts_uy) throw InputError("y codeword outside its conditional type class");
    }
}

MacComposition mac_composition(const Joint& p_uxy, int n) {
    if (p_uxy.rank() != 3) throw InputError("expected a distribution over (U, X, Y)");
    MacComposition mc;
    mc.counts_ux = composition_counts(p_uxy.marginal({0, 1}), n);
    mc.counts_uy = composition_counts(p_uxy.marginal({0, 2}), n);
    return mc;
}

}  // namespace relexp::ensemble
