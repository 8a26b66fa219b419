#include "relexp/ensemble/empirical.hpp"

#include <cmath>

#include "relexp/core/parallel.hpp"

namespace relexp::ensemble {

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("a fit needs at least two points");
    double k = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double den = k * sxx - sx * sx;
    if (den == 0) throw InputError("a fit needs two distinct abscissae");
    double slope = (k * sxy - sx * sy) / den;
    return {slope, (sy - slope * sx) / k};
}

EmpiricalReport empirical_exponent(const Joint& w, Metric m, const Joint& p, double rate, const EmpiricalOptions& opt) {
    if (opt.codes_per_length < 1) throw InputError("at least one code per length is needed");
    EmpiricalReport report;
    std::vector<double> xs, ys;
    for (std::size_t li = 0; li < opt.lengths.size(); ++li) {
        int n = opt.lengths[li];
        EmpiricalRow row;
        row.n = n;
        row.composition = round_composition(p, n);
        row.m = std::max(1, static_cast<int>(std::floor(std::exp2(n * rate) + 1e-9)));
        row.exhaustive = std::pow(static_cast<double>(w.dim(1)), n) <= opt.max_exact_outputs;
        std::vector<double> errors(static_cast<std::size_t>(opt.codes_per_length));
        parallel_for(errors.size(), [&](std::size_t k) {
            Rng rng = split_rng(opt.seed, (static_cast<std::uint64_t>(n) << 32) | k);
            P2PCode code = sample_p2p_code(row.composition, row.m, rng);
            errors[k] = row.exhaustive ? exact_error(code, w, m, {opt.max_exact_outputs})
                                       : monte_carlo_error(code, w, m, opt.trials_per_code, rng).value;
        });
        double sum = 0, sq = 0;
        for (double e : errors) {
            sum += e;
            sq += e * e;
        }
        double cnt = static_cast<double>(errors.size());
        row.mean_error = sum / cnt;
        row.spread = cnt > 1 ? std::sqrt(std::max(0.0, (sq - cnt * row.mean_error * row.mean_error) / (cnt - 1)) / cnt) : 0;
        if (std::isfinite(opt.e_t)) {
            row.band_lo = std::isfinite(opt.e_tl) ? std::exp2(-n * (opt.e_tl + 4 * opt.delta)) : 0.0;
            row.band_hi = std::exp2(-n * (opt.e_t - 3 * opt.delta));
            int inside = 0;
            for (double e : errors) inside += (e >= row.band_lo && e <= row.band_hi) ? 1 : 0;
            row.typical_fraction = inside / cnt;
        }
        if (row.mean_error > 0) {
            xs.push_back(n);
            ys.push_back(-std::log2(row.mean_error));
        }
        report.rows.push_back(row);
    }
    if (xs.size() >= 2) {
        auto [slope, intercept] = linear_fit(xs, ys);
        report.slope = slope;
        report.intercept = intercept;
    }
    return report;
}

}  // namespace relexp::ensemble
