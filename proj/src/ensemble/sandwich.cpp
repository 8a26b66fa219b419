#include "relexp/ensemble/sandwich.hpp"

#include <cmath>

#include "relexp/core/info.hpp"

namespace relexp::ensemble {

namespace {

std::vector<int> project(std::span<const int> counts, const std::vector<int>& map, std::size_t cells) {
    std::vector<int> out(cells, 0);
    for (std::size_t k = 0; k < counts.size(); ++k) out[static_cast<std::size_t>(map[k])] += counts[k];
    return out;
}

}  // namespace

SandwichReport sandwich_p2p(const P2PCode& code, const Joint& w, Metric m, double delta, const ErrorOptions& opt) {
    check_code(code);
    SandwichReport r;
    r.exact = exact_error(code, w, m, opt);
    int nx = code.nx, ny = w.dim(1), n = code.n;
    double mm = static_cast<double>(code.size());
    P2PMetricTable metric(m, w);

    std::vector<int> dims3{nx, nx, ny};
    std::vector<int> dims4{nx, nx, nx, ny};
    std::vector<int> map_xy = projection_map(dims3, {0, 2});
    std::vector<int> map_ty = projection_map(dims3, {1, 2});
    std::vector<int> map_xt = projection_map({nx, nx, nx}, {0, 1});
    std::vector<int> map_xh = projection_map({nx, nx, nx}, {0, 2});
    std::size_t xy_cells = static_cast<std::size_t>(nx * ny);
    std::size_t pair_cells = static_cast<std::size_t>(nx * nx);

    TypeTally pairs = pair_tally(code);
    TypeTally triples = triple_tally(code);
    std::map<std::vector<int>, double> best_by_xy;

    for (const auto& [vp, pair_count] : pairs) {
        double pi = static_cast<double>(pair_count) / mm;
        // triples whose (X, X~) and (X, X^) types both equal vp
        std::vector<std::pair<std::vector<int>, double>> matching;
        for (const auto& [vt, triple_count] : triples)
            if (project(vt, map_xt, pair_cells) == vp && project(vt, map_xh, pair_cells) == vp)
                matching.push_back({vt, static_cast<double>(triple_count) / mm});

        for_each_type(dims3, n, {{{0, 1}, vp}}, [&](std::span<const int> v) {
            std::vector<int> xy = project(v, map_xy, xy_cells);
            std::vector<int> ty = project(v, map_ty, xy_cells);
            if (!alpha_leq(metric(ty), metric(xy))) return;
            double log_weight = 0;
            for (std::size_t k = 0; k < xy_cells; ++k) {
                if (xy[k] == 0) continue;
                if (!(w[k] > 0)) return;  // shell has zero probability
                log_weight += xy[k] * std::log2(w[k]);
            }
            double weight = std::exp2(log_weight);
            Joint vt = type_of(std::vector<int>(v.begin(), v.end()), dims3);
            double h_y_xx = cond_entropy(vt, {2}, {0, 1});
            double h_y_x = cond_entropy(vt, {2}, {0});

            r.upper += weight * std::min(pi * std::exp2(n * h_y_xx), std::exp2(n * h_y_x));

            SandwichTerm term;
            term.v.assign(v.begin(), v.end());
            term.weight = weight;
            term.pi = pi;
            term.b = pi * shell_size(v, static_cast<std::size_t>(ny));
            double lambda_sum = 0;
            for (const auto& [vt3, lambda] : matching) {
                std::vector<MarginalPin> pins{{{0, 1, 2}, vt3}, {{0, 1, 3}, term.v}, {{0, 2, 3}, term.v}};
                for_each_type(dims4, n, pins, [&](std::span<const int> v4) {
                    term.c += lambda * shell_size(v4, static_cast<std::size_t>(ny));
                    Joint j4 = type_of(std::vector<int>(v4.begin(), v4.end()), dims4);
                    lambda_sum += lambda * std::exp2(-n * std::max(0.0, mutual_info(j4, {2}, {3}, {0, 1})));
                });
            }
            double bracket = std::max(0.0, term.b - term.c);
            double& best = best_by_xy[xy];
            best = std::max(best, weight * bracket);
            r.lower_delta_form += weight * std::exp2(n * (h_y_xx - delta)) * std::max(0.0, pi - lambda_sum);
            r.terms.push_back(std::move(term));
        });
    }
    for (const auto& kv : best_by_xy) r.lower += kv.second;
    const double slack = 1e-9;
    r.pass = r.lower <= r.exact * (1 + slack) + 1e-300 && r.exact <= r.upper * (1 + slack) + 1e-300;
    return r;
}

}  // namespace relexp::ensemble
