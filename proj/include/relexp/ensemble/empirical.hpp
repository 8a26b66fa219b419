#pragma once

// Measured decay of the ensemble-average error probability with blocklength.

#include <cstdint>
#include <vector>

#include "relexp/ensemble/error_prob.hpp"

namespace relexp::ensemble {

struct EmpiricalOptions {
    std::vector<int> lengths{8, 12, 16, 20};
    int codes_per_length = 300;
    std::uint64_t seed = 1;
    std::int64_t trials_per_code = 2000;  // Monte Carlo path
    double max_exact_outputs = 4096;      // exhaustive path when |Y|^n is at most this
    // Band for the fraction of codes whose error lies in
    // [2^{-n(e_tl + 4 delta)}, 2^{-n(e_t - 3 delta)}]; skipped unless e_t is finite.
    double delta = 0.1;
    double e_t = kInf, e_tl = kInf;
};

struct EmpiricalRow {
    int n = 0;
    int m = 0;
    std::vector<int> composition;
    bool exhaustive = false;
    double mean_error = 0;
    double spread = 0;             // standard error of the mean over codes
    double typical_fraction = -1;  // -1 when no band was requested
    double band_lo = 0, band_hi = 0;
};

struct EmpiricalReport {
    std::vector<EmpiricalRow> rows;
    // least-squares slope of -log2(mean error) against n; +inf when every mean is 0
    double slope = kInf;
    double intercept = 0;
};

// M = floor(2^{nR}) words per code, composition = rounding of n P.
EmpiricalReport empirical_exponent(const Joint& w, Metric m, const Joint& p, double rate, const EmpiricalOptions& opt);

// Least-squares fit y = slope x + intercept.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace relexp::ensemble
