#include "relexp/opt/search.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace relexp::opt {

namespace {

struct Direction {
    const Move* sparse = nullptr;
    const std::vector<double>* dense = nullptr;
    double step = 0;
    int last_sign = 1;
};

// Largest t >= 0 with x + t * sign * d >= 0.
double max_step(const Direction& d, int sign, std::span<const double> x) {
    double t = kInf;
    if (d.sparse) {
        for (int k = 0; k < d.sparse->len; ++k) {
            double c = sign * d.sparse->coef[static_cast<std::size_t>(k)];
            if (c < 0) t = std::min(t, x[static_cast<std::size_t>(d.sparse->cell[static_cast<std::size_t>(k)])] / -c);
        }
    } else {
        const auto& v = *d.dense;
        for (std::size_t c = 0; c < v.size(); ++c) {
            double cc = sign * v[c];
            if (cc < -1e-14) t = std::min(t, x[c] / -cc);
        }
    }
    return t;
}

void apply(const Direction& d, double t, std::span<const double> x, std::vector<double>& out) {
    out.assign(x.begin(), x.end());
    if (d.sparse) {
        for (int k = 0; k < d.sparse->len; ++k) {
            auto c = static_cast<std::size_t>(d.sparse->cell[static_cast<std::size_t>(k)]);
            out[c] += t * d.sparse->coef[static_cast<std::size_t>(k)];
            if (out[c] < 0) out[c] = 0;
        }
    } else {
        const auto& v = *d.dense;
        for (std::size_t c = 0; c < v.size(); ++c) {
            out[c] += t * v[c];
            if (out[c] < 0) out[c] = 0;
        }
    }
}

// Core loop: minimize `f` over the slice, accepting only points where
// `accept` holds. Fixed moves have their own step sizes; random combinations
// of the moves that stay inside the current face share one step size and let
// the search slide along curved constraint boundaries.
template <class F, class A>
SearchResult search_loop(const MoveSet& moves, std::vector<double> x, F&& f, A&& accept, const SearchOptions& opt,
                         Rng& rng, double stop_below) {
    std::vector<Direction> dirs;
    for (const auto& m : moves.sparse) dirs.push_back({&m, nullptr, opt.initial_step, 1});
    for (const auto& v : moves.dense) dirs.push_back({nullptr, &v, opt.initial_step, 1});
    SearchResult res;
    double fx = f(x);
    res.evals = 1;
    std::vector<std::size_t> order(dirs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> trial;
    std::vector<double> rdir(x.size());
    Direction rd{nullptr, &rdir, opt.initial_step, 1};
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n_random = std::max<int>(8, 2 * moves.dimension);

    auto try_dir = [&](Direction& d) {
        for (int attempt = 0; attempt < 2; ++attempt) {
            int sign = attempt == 0 ? d.last_sign : -d.last_sign;
            double t = std::min(d.step, max_step(d, sign, x));
            if (!(t > 1e-16)) continue;
            apply(d, sign * t, x, trial);
            if (!accept(trial)) continue;
            double ft = f(trial);
            ++res.evals;
            if (ft < fx) {
                x.swap(trial);
                fx = ft;
                d.last_sign = sign;
                return true;
            }
        }
        return false;
    };

    while (res.evals < opt.max_evals && fx > stop_below) {
        bool active = false;
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t oi : order) {
            Direction& d = dirs[oi];
            if (d.step < opt.min_step) continue;
            active = true;
            if (try_dir(d))
                d.step = std::min(d.step * 2.0, 0.5);
            else
                d.step *= 0.5;
            if (res.evals >= opt.max_evals || fx <= stop_below) break;
        }
        if (rd.step >= opt.min_step && !moves.sparse.empty()) {
            active = true;
            bool any = false;
            for (int k = 0; k < n_random && res.evals < opt.max_evals && fx > stop_below; ++k) {
                std::fill(rdir.begin(), rdir.end(), 0.0);
                for (const auto& m : moves.sparse) {
                    bool inside = true;
                    for (int t = 0; t < m.len; ++t)
                        if (!(x[static_cast<std::size_t>(m.cell[static_cast<std::size_t>(t)])] > 0)) inside = false;
                    if (!inside) continue;
                    double g = gauss(rng);
                    for (int t = 0; t < m.len; ++t)
                        rdir[static_cast<std::size_t>(m.cell[static_cast<std::size_t>(t)])] += g * m.coef[static_cast<std::size_t>(t)];
                }
                double nrm = 0;
                for (double v : rdir) nrm += v * v;
                if (!(nrm > 0)) break;
                nrm = std::sqrt(nrm);
                for (double& v : rdir) v /= nrm;
                if (try_dir(rd)) {
                    any = true;
                    // keep going while the direction pays off
                    double keep = rd.step;
                    while (res.evals < opt.max_evals) {
                        rd.step = std::min(rd.step * 2.0, 0.5);
                        if (!try_dir(rd)) break;
                    }
                    rd.step = keep;
                }
            }
            rd.step = any ? std::min(rd.step * 2.0, 0.5) : rd.step * 0.5;
        }
        if (!active) break;
    }
    res.x = std::move(x);
    res.value = fx;
    return res;
}

}  // namespace

bool is_feasible(const Problem& p, std::span<const double> x, double tol) {
    for (double v : x)
        if (v < 0 || !std::isfinite(v)) return false;
    if (slice_residual(x, p.slice) > tol) return false;
    return !(p.violation && p.violation(x) > 0);
}

SearchResult pattern_search(const Problem& p, const MoveSet& moves, std::vector<double> x0, const SearchOptions& opt,
                            Rng& rng) {
    auto accept = [&](std::span<const double> x) { return !(p.violation && p.violation(x) > 0); };
    SearchResult r = search_loop(moves, std::move(x0), p.objective, accept, opt, rng, -kInf);
    r.feasible = accept(r.x) && r.value < kInf;
    return r;
}

std::optional<std::vector<double>> find_feasible(const Problem& p, const MoveSet& moves, std::vector<double> x0,
                                                 const SearchOptions& opt, Rng& rng) {
    if (!p.violation || !(p.violation(x0) > 0)) return x0;
    SearchOptions o = opt;
    o.max_evals = std::min<long>(opt.max_evals, 100000);
    auto always = [](std::span<const double>) { return true; };
    SearchResult r = search_loop(moves, std::move(x0), p.violation, always, o, rng, 0.0);
    if (p.violation(r.x) > 0) return std::nullopt;
    return r.x;
}

namespace {

// Second-order refinement on each smooth piece; only points the problem
// itself accepts with a lower objective replace r.
// Each piece is polished from r itself and from r blended toward an interior
// point, which reopens cells the search pushed onto the boundary.
bool refine(const Problem& p, SearchResult& r, const std::vector<double>* interior) {
    bool improved = false;
    std::vector<double> blend;
    if (interior) {
        blend.resize(r.x.size());
        for (std::size_t c = 0; c < blend.size(); ++c) blend[c] = 0.999 * r.x[c] + 0.001 * (*interior)[c];
    }
    for (const auto& piece : p.pieces) {
        for (const auto* from : {&r.x, &blend}) {
            if (from->empty()) continue;
            PolishResult pr = polish(p.slice, piece, *from);
            if (!pr.feasible) continue;
            if (p.violation && p.violation(pr.x) > 0) continue;
            double v = p.objective(pr.x);
            if (v < r.value) {
                r.value = v;
                r.x = std::move(pr.x);
                improved = true;
            }
        }
    }
    return improved;
}

}  // namespace

Problem make_problem(const Slice& s, const Composite& c) {
    Problem p;
    p.slice = s;
    auto ev = std::make_shared<CompositeEvaluator>(s.dims, c);
    p.objective = [ev](std::span<const double> x) { return ev->objective(x); };
    p.violation = [ev](std::span<const double> x) { return ev->violation(x); };
    p.pieces = c.pieces();
    return p;
}

SolveResult minimize(const Problem& p, const SolveOptions& opt) {
    Rng rng(opt.seed);
    MoveSet moves = build_moves(p.slice);
    const std::vector<double> interior = interior_point(p.slice);
    std::vector<std::vector<double>> starts;
    for (const auto& s : opt.seeds) {
        std::vector<double> x = s;
        if (x.size() != p.slice.cells()) continue;
        if (slice_residual(x, p.slice) > 1e-12 && !ipf_project(x, p.slice)) continue;
        starts.push_back(std::move(x));
    }
    for (int k = 0; k < opt.restarts; ++k) starts.push_back(random_start(p.slice, rng));

    SolveResult best;
    double lo = kInf, hi = -kInf;
    for (auto& x0 : starts) {
        ++best.cert.starts;
        std::vector<double> from = x0;
        auto feas = find_feasible(p, moves, std::move(x0), opt.search, rng);
        if (!feas && !p.pieces.empty()) {
            // second-order restoration: each piece's SQP run ends feasible or not at all
            SearchResult r0;
            r0.x = std::move(from);
            r0.value = kInf;
            if (refine(p, r0, nullptr)) feas = std::move(r0.x);
        }
        if (!feas) continue;
        SearchResult r = pattern_search(p, moves, std::move(*feas), opt.search, rng);
        best.cert.evals += r.evals;
        if (!r.feasible) continue;
        if (!p.pieces.empty()) {
            SearchOptions again = opt.search;
            again.initial_step = 1e-3;
            again.max_evals = std::max<long>(1000, opt.search.max_evals / 4);
            bool any = false;
            for (int round = 0; round < 8 && refine(p, r, round == 0 ? &interior : nullptr); ++round) {
                any = true;
                SearchResult r2 = pattern_search(p, moves, r.x, again, rng);
                best.cert.evals += r2.evals;
                if (r2.feasible && r2.value < r.value) r = std::move(r2);
            }
            if (any) ++best.cert.polished;
        }
        ++best.cert.feasible_starts;
        best.cert.start_values.push_back(r.value);
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
        if (r.value < best.value) {
            best.value = r.value;
            best.argmin = std::move(r.x);
            best.feasible = true;
        }
    }
    best.cert.refined_value = best.value;
    best.cert.dispersion = best.cert.feasible_starts > 0 ? hi - lo : 0.0;
    return best;
}

}  // namespace relexp::opt
