#pragma once

// Sequences, empirical types and type-class counting.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "relexp/core/joint.hpp"

namespace relexp {

using Sequence = std::vector<std::uint8_t>;
using Rng = std::mt19937_64;

// Joint type counts of equal-length sequences; dims[k] is the alphabet size
// of seqs[k]. Result is row-major over (seqs[0], seqs[1], ...).
std::vector<int> joint_counts(std::span<const Sequence* const> seqs, const std::vector<int>& dims);
std::vector<int> joint_counts(std::initializer_list<const Sequence*> seqs, const std::vector<int>& dims);
// Counts divided by n.
Joint type_of(const std::vector<int>& counts, const std::vector<int>& dims);

// log2 of n! / prod_k counts[k]!
double log2_multinomial(std::span<const int> counts);
// n! / prod_k counts[k]! computed as a product of exact binomials.
double multinomial(std::span<const int> counts);
// Size of the conditional shell: number of continuations b with a fixed
// prefix pattern a, given joint counts laid out as rows (a-cells) x width (b-cells).
double shell_size(std::span<const int> counts, std::size_t width);
double log2_shell_size(std::span<const int> counts, std::size_t width);

// Exact composition of p at length n. Throws if n * p is not integral.
std::vector<int> composition_counts(const Joint& p, int n, double tol = 1e-9);
// Largest-remainder rounding of n * p.
std::vector<int> round_composition(const Joint& p, int n);

struct MarginalPin {
    Axes axes;                // axes of the pinned marginal
    std::vector<int> counts;  // required counts, row-major over axes
};

// Visits every count table with total n whose pinned marginals match.
// support[c] == 0 forces cell c to zero.
void for_each_type(const std::vector<int>& dims, int n, const std::vector<MarginalPin>& pins,
                   const std::function<void(std::span<const int>)>& visit,
                   const std::vector<char>* support = nullptr);
std::vector<std::vector<int>> enumerate_types(const std::vector<int>& dims, int n,
                                              const std::vector<MarginalPin>& pins = {});
// Number of types without pins: C(n + cells - 1, cells - 1).
double count_types(std::size_t cells, int n);

// Uniform draw from the type class with the given symbol counts.
Sequence random_sequence(std::span<const int> counts, Rng& rng);
// Uniform draw from the conditional shell of `base`: cond_counts is laid out
// as (base symbol) x (new symbol); row sums must match base's composition.
Sequence random_conditional_sequence(const Sequence& base, std::span<const int> cond_counts, int new_alphabet,
                                     Rng& rng);

}  // namespace relexp
