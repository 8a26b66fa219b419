#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's information functions, type enumeration or decoders.

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// Dense table with row-major storage.
struct Table {
    std::vector<int> dims;
    std::vector<double> m;

    double total() const;
    Table marginal(const std::vector<int>& axes) const;
};

double entropy(const Table& t);                           // of the full table, bits
double entropy(const Table& t, const std::vector<int>& axes);
double cond_entropy(const Table& t, const std::vector<int>& a, const std::vector<int>& given);
// H(AG) + H(BG) - H(ABG) - H(G)
double mutual_info(const Table& t, const std::vector<int>& a, const std::vector<int>& b,
                   const std::vector<int>& given = {});
double divergence(const std::vector<double>& p, const std::vector<double>& q);

Table random_table(const std::vector<int>& dims, std::mt19937_64& rng, double zero_prob = 0.0);

// Gallager's random-coding exponent of BSC(p) with the uniform input:
// max over rho in [0, 1] of E0(rho) - rho R.
double gallager_er_bsc(double p, double rate);

// Constrained minimum over V(X, X~, Y) with uniform X and X~ marginals for
// BSC(p) under maximum-likelihood decoding: every lattice point of the given
// denominator is scored, then the best few are refined by a compass search.
// expurgated adds I(X;X~) <= R to the random-coding set.
double lattice_exponent_bsc(double p, double rate, bool expurgated, int denominator = 40);

// Exhaustive error probability of a code over a DMC with alphabet sizes
// nx, ny (w row-major W(y|x)); ties with the sent word count as errors.
// metric 0: maximum likelihood, 1: minimum conditional entropy of y given x.
double exact_error(const std::vector<std::vector<int>>& code, const std::vector<double>& w, int nx, int ny,
                   int metric);

// (1/M) sum_i sum_y W(y|x_i) #{j != i : alpha_j <= alpha_i}
double union_bound(const std::vector<std::vector<int>>& code, const std::vector<double>& w, int nx, int ny,
                   int metric);
// (1/M) sum_i sum_y W(y|x_i) #{(j, k) distinct, both != i, alpha_j = alpha_k <= alpha_i in the
// sense that (x_i, x_j, y) and (x_i, x_k, y) share a joint type}
double pair_overlap(const std::vector<std::vector<int>>& code, const std::vector<double>& w, int nx, int ny,
                    int metric);

// Joint type counts of sequences over the given alphabets.
std::vector<int> counts(const std::vector<const std::vector<int>*>& seqs, const std::vector<int>& dims);

// Number of sequences of length n over an alphabet of size k with the given
// symbol counts, by enumerating every sequence.
std::int64_t brute_type_class_size(const std::vector<int>& symbol_counts);

}  // namespace oracle
