#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "relexp/core/info.hpp"
#include "relexp/core/plan.hpp"
#include "relexp/dmc/exponents.hpp"
#include "relexp/simd/kernels.hpp"

namespace relexp::dmc {

namespace {

// Quantities of flat points over (X, X~, Y).
class Evaluator {
public:
    Evaluator(const Joint& w, Metric m) : metric_(m), nx_(w.dim(0)), ny_(w.dim(1)), plan_({nx_, nx_, ny_}) {
        full_ = plan_.add({0, 1, 2});
        xy_ = plan_.add({0, 2});
        ty_ = plan_.add({1, 2});
        xt_ = plan_.add({0, 1});
        x_ = plan_.add({0});
        t_ = plan_.add({1});
        w_.assign(w.mass().begin(), w.mass().end());
    }

    Quantities operator()(std::span<const double> v) {
        plan_.evaluate(v);
        Quantities q;
        auto mxy = plan_.marginal(xy_);
        auto mty = plan_.marginal(ty_);
        double cross_xy = simd::sum_plog2q(mxy.data(), w_.data(), w_.size());
        double cross_ty = simd::sum_plog2q(mty.data(), w_.data(), w_.size());
        double hx = plan_.entropy(x_), ht = plan_.entropy(t_);
        double hxy = plan_.entropy(xy_), hty = plan_.entropy(ty_);
        q.divergence = cross_xy == -kInf ? kInf : std::max(0.0, hx - hxy - cross_xy);
        q.i_cand = std::max(0.0, ht + hxy - plan_.entropy(full_));
        q.i_pair = std::max(0.0, hx + ht - plan_.entropy(xt_));
        if (metric_ == Metric::ml) {
            q.alpha_sent = cross_xy == -kInf ? kInf : -cross_xy;
            q.alpha_cand = cross_ty == -kInf ? kInf : -cross_ty;
        } else {
            q.alpha_sent = hxy - hx;
            q.alpha_cand = hty - ht;
        }
        return q;
    }

private:
    Metric metric_;
    int nx_, ny_;
    EntropyPlan plan_;
    int full_, xy_, ty_, xt_, x_, t_;
    std::vector<double> w_;
};

struct LatticeEntry {
    std::vector<double> x;
    Quantities q;
};

using Lattice = std::vector<LatticeEntry>;

std::string lattice_key(const Joint& w, const Joint& p, Metric m, int n) {
    std::string k = metric_name(m) + ":" + std::to_string(n) + ":";
    char buf[64];
    for (double v : w.mass()) {
        std::snprintf(buf, sizeof buf, "%.17g,", v);
        k += buf;
    }
    k += "|";
    for (double v : p.mass()) {
        std::snprintf(buf, sizeof buf, "%.17g,", v);
        k += buf;
    }
    return k;
}

std::shared_ptr<const Lattice> get_lattice(const Joint& w, const Joint& p, Metric m, int n, const opt::Slice& slice) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const Lattice>> cache;
    std::string key = lattice_key(w, p, m, n);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto lat = std::make_shared<Lattice>();
    Evaluator ev(w, m);
    bool exact = opt::for_each_lattice_point(slice, n, [&](std::span<const double> x) {
        lat->push_back({std::vector<double>(x.begin(), x.end()), ev(x)});
    });
    if (!exact) lat->clear();
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 64) cache.clear();
    cache.emplace(key, lat);
    return lat;
}

std::uint64_t mix_seed(std::uint64_t seed, Family f, double rate) {
    std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(f) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(std::llround(rate * 1e9)) + (h << 6) + (h >> 2);
    return h;
}

std::vector<std::vector<double>> special_points(const Joint& w, const Joint& p) {
    int nx = w.dim(0), ny = w.dim(1);
    std::vector<double> copy(static_cast<std::size_t>(nx * nx * ny), 0.0), prod = copy;
    for (int x = 0; x < nx; ++x)
        for (int t = 0; t < nx; ++t)
            for (int y = 0; y < ny; ++y) {
                std::size_t c = static_cast<std::size_t>((x * nx + t) * ny + y);
                double wy = w.at({x, y});
                prod[c] = p[static_cast<std::size_t>(x)] * p[static_cast<std::size_t>(t)] * wy;
                if (x == t) copy[c] = p[static_cast<std::size_t>(x)] * wy;
            }
    std::vector<double> mix(copy.size());
    for (std::size_t c = 0; c < mix.size(); ++c) mix[c] = 0.5 * (copy[c] + prod[c]);
    return {copy, prod, mix};
}

// Smooth pieces of a family: below the rate the positive part vanishes, above
// it is linear, so each piece is a smooth program.
std::vector<opt::Piece> family_pieces(Family f, const Joint& w, Metric m, double rate, const opt::Slice& s) {
    int nx = w.dim(0), ny = w.dim(1);
    std::size_t cells = s.cells();
    auto lw = [&](int a, int y) {
        double v = w.at({a, y});
        return v > 0 ? std::log2(v) : 0.0;
    };
    opt::Functional div;
    div.add_entropy({0}).add_entropy({0, 2}, -1.0);
    div.linear.assign(cells, 0.0);
    opt::Functional alpha;
    if (m == Metric::ml) alpha.linear.assign(cells, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int t = 0; t < nx; ++t)
            for (int y = 0; y < ny; ++y) {
                std::size_t c = static_cast<std::size_t>((x * nx + t) * ny + y);
                if (!s.allowed(c)) continue;
                div.linear[c] = -lw(x, y);
                if (m == Metric::ml) alpha.linear[c] = lw(x, y) - lw(t, y);
            }
    if (m != Metric::ml) alpha.add_cond_entropy({2}, {1}).add_cond_entropy({2}, {0}, -1.0);
    opt::Functional icand;
    icand.add_mutual_info({1}, {0, 2});

    std::vector<opt::Functional> common{alpha};
    double cap = f == Family::T || f == Family::TL ? 2 * rate : f == Family::ex ? rate : kInf;
    if (cap < kInf) {
        opt::Functional c;
        c.add_mutual_info({0}, {1}).add_constant(-cap);
        common.push_back(c);
    }
    std::vector<opt::Piece> out;
    if (f == Family::r || f == Family::T || f == Family::ex) {
        opt::Piece below{div, common};
        below.constraints.push_back(opt::Functional(icand).add_constant(-rate));
        out.push_back(std::move(below));
    }
    opt::Piece above{opt::Functional(div).add(icand).add_constant(-rate), common};
    above.constraints.push_back(opt::Functional().add(icand, -1.0).add_constant(rate));
    out.push_back(std::move(above));
    return out;
}

}  // namespace

opt::Slice coupling_slice(const Joint& w, const Joint& p) {
    if (w.rank() != 2) throw InputError("channel must have two axes");
    if (p.rank() != 1 || p.dim(0) != w.dim(0)) throw InputError("input distribution size does not match the channel");
    if (!p.is_distribution(1e-9)) throw InputError("input distribution must sum to 1");
    int nx = w.dim(0), ny = w.dim(1);
    opt::Slice s;
    s.dims = {nx, nx, ny};
    std::vector<double> pt(p.mass().begin(), p.mass().end());
    s.pins.push_back({{0}, pt});
    s.pins.push_back({{1}, pt});
    s.support.assign(s.cells(), 1);
    for (int x = 0; x < nx; ++x)
        for (int t = 0; t < nx; ++t)
            for (int y = 0; y < ny; ++y)
                if (!(w.at({x, y}) > 0)) s.support[static_cast<std::size_t>((x * nx + t) * ny + y)] = 0;
    return s;
}

std::vector<Result> compute_exponents(const Joint& w, const Joint& p, Metric m, double rate,
                                      const std::vector<Family>& families, const Options& opt,
                                      const std::vector<Joint>& warm) {
    if (rate < 0) throw InputError("rate must be nonnegative");
    check_conditional(w, 1, 1e-9, "channel");
    opt::Slice slice = coupling_slice(w, p);
    if (m == Metric::ml) {
        // a candidate letter that cannot produce y makes alpha infinite
        int nx = w.dim(0), ny = w.dim(1);
        for (int x = 0; x < nx; ++x)
            for (int t = 0; t < nx; ++t)
                for (int y = 0; y < ny; ++y)
                    if (!(w.at({t, y}) > 0)) slice.support[static_cast<std::size_t>((x * nx + t) * ny + y)] = 0;
    }
    auto ev = std::make_shared<Evaluator>(w, m);

    std::shared_ptr<const Lattice> lattice;
    if (opt.grid_denominator > 0 && static_cast<int>(slice.cells()) <= opt.max_lattice_cells)
        lattice = get_lattice(w, p, m, opt.grid_denominator, slice);

    std::vector<std::vector<double>> common = special_points(w, p);
    for (const auto& j : warm)
        if (j.size() == slice.cells()) common.emplace_back(j.mass().begin(), j.mass().end());

    std::vector<Result> out;
    std::vector<std::vector<double>> pool;
    for (Family f : families) {
        Result r;
        r.family = f;
        r.rate = rate;
        opt::SolveOptions so;
        so.restarts = opt.restarts;
        so.search = opt.search;
        so.seed = mix_seed(opt.seed, f, rate);
        so.seeds = common;
        if (lattice && !lattice->empty()) {
            std::vector<std::pair<double, std::size_t>> best;
            long feas = 0;
            for (std::size_t k = 0; k < lattice->size(); ++k) {
                const auto& e = (*lattice)[k];
                if (!family_member(f, e.q, rate, 0.0)) continue;
                ++feas;
                best.push_back({family_objective(f, e.q, rate), k});
            }
            std::size_t keep = std::min<std::size_t>(best.size(), static_cast<std::size_t>(std::max(opt.lattice_seeds, 0)));
            std::partial_sort(best.begin(), best.begin() + static_cast<long>(keep), best.end());
            for (std::size_t k = 0; k < keep; ++k) so.seeds.push_back((*lattice)[best[k].second].x);
            r.cert.lattice_points = static_cast<long>(lattice->size());
            r.cert.lattice_feasible = feas;
            r.cert.lattice_denominator = opt.grid_denominator;
            if (!best.empty()) r.cert.lattice_value = best.front().first;
        }
        opt::Problem prob;
        prob.slice = slice;
        prob.objective = [ev, f, rate](std::span<const double> x) { return family_objective(f, (*ev)(x), rate); };
        prob.violation = [ev, f, rate](std::span<const double> x) { return family_violation(f, (*ev)(x), rate); };
        prob.pieces = family_pieces(f, w, m, rate, slice);
        opt::SolveResult sr = opt::minimize(prob, so);
        double lattice_value = r.cert.lattice_value;
        long lp = r.cert.lattice_points, lf = r.cert.lattice_feasible;
        r.cert = sr.cert;
        r.cert.lattice_value = lattice_value;
        r.cert.lattice_points = lp;
        r.cert.lattice_feasible = lf;
        r.cert.lattice_denominator = lattice ? opt.grid_denominator : 0;
        if (sr.feasible) {
            r.value = sr.value;
            r.feasible = true;
            r.argmin = Joint(slice.dims, sr.argmin);
            pool.push_back(sr.argmin);
        }
        out.push_back(std::move(r));
    }

    // every point found for one family is a candidate for all of them
    for (auto& r : out) {
        for (const auto& x : pool) {
            Quantities q = (*ev)(x);
            if (family_violation(r.family, q, rate) > 0) continue;
            double v = family_objective(r.family, q, rate);
            if (v < r.value) {
                r.value = v;
                r.feasible = true;
                r.argmin = Joint(slice.dims, x);
            }
        }
        if (r.feasible) r.at_argmin = (*ev)(r.argmin.mass());
        r.value = std::max(0.0, r.value);  // rounding can leave -1e-16
    }
    return out;
}

Result compute_exponent(const Joint& w, const Joint& p, Metric m, double rate, Family f, const Options& opt) {
    return compute_exponents(w, p, m, rate, {f}, opt).front();
}

namespace {

std::vector<Joint> simplex_grid(int k, int denom) {
    std::vector<Joint> out;
    for (const auto& c : enumerate_types({k}, denom)) {
        std::vector<double> m(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) m[i] = c[i] / static_cast<double>(denom);
        out.emplace_back(std::vector<int>{k}, std::move(m));
    }
    return out;
}

}  // namespace

CompositionResult maximize_over_composition(const Joint& w, Metric m, double rate, Family f, const Options& opt,
                                            int simplex_denominator, const std::vector<Family>& companions) {
    int k = w.dim(0);
    CompositionResult best;
    auto eval = [&](const Joint& p, const std::vector<Joint>& warm) -> Result {
        if (entropy(p) < rate) {
            Result r;
            r.family = f;
            r.rate = rate;
            return r;  // no code of this rate has composition p
        }
        std::vector<Family> fams{f};
        for (Family g : companions)
            if (g != f) fams.push_back(g);
        return compute_exponents(w, p, m, rate, fams, opt, warm).front();
    };
    auto better = [](const Result& r, double cur) { return r.feasible && r.value < kInf && r.value > cur; };
    double cur = -kInf;
    for (const Joint& p : simplex_grid(k, simplex_denominator)) {
        Result r = eval(p, {});
        best.evaluated.push_back({p, r.value});
        if (entropy(p) < rate) continue;
        if (better(r, cur)) {
            cur = r.value;
            best.p = p;
            best.inner = r;
        }
    }
    if (best.p.size() == 0) return best;

    // local refinement: move mass between pairs of input letters
    double step = 1.0 / simplex_denominator;
    while (step > 1e-4) {
        bool improved = false;
        for (int a = 0; a < k && !improved; ++a)
            for (int b = 0; b < k && !improved; ++b) {
                if (a == b) continue;
                Joint p = best.p;
                double t = std::min(step, p[static_cast<std::size_t>(b)]);
                if (!(t > 0)) continue;
                p[static_cast<std::size_t>(a)] += t;
                p[static_cast<std::size_t>(b)] -= t;
                if (entropy(p) < rate) continue;
                Result r = eval(p, {best.inner.argmin.size() ? best.inner.argmin : Joint()});
                best.evaluated.push_back({p, r.value});
                if (better(r, cur + 1e-12)) {
                    cur = r.value;
                    best.p = p;
                    best.inner = r;
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
    }
    best.value = cur;
    return best;
}

CriticalRate critical_rate(const Joint& w, const Joint& p, Metric m, const Options& opt, double resolution) {
    const double tau = 1e-4;
    CriticalRate cr;
    std::vector<Joint> warm;
    auto active = [&](double rate) {
        Result r = compute_exponents(w, p, m, rate, {Family::r}, opt, warm).front();
        if (r.feasible) warm = {r.argmin};
        bool a = r.feasible && r.at_argmin.i_cand > rate + tau;
        cr.samples.push_back({rate, a});
        return a;
    };
    double lo = 0, hi = entropy(p);
    if (!active(lo)) {
        cr.rate = 0;
        return cr;
    }
    if (active(hi)) {
        cr.rate = hi;
        return cr;
    }
    while (hi - lo > resolution) {
        double mid = 0.5 * (lo + hi);
        if (active(mid))
            lo = mid;
        else
            hi = mid;
    }
    cr.rate = 0.5 * (lo + hi);
    return cr;
}

LinearFormCheck verify_linear_form(const Joint& w, Metric m, double rate, const Options& opt, double tolerance,
                                    int simplex_denominator) {
    LinearFormCheck c;
    c.rate = rate;
    CompositionResult lin = maximize_over_composition(w, m, rate, Family::rL, opt, simplex_denominator, {Family::r});
    CompositionResult rnd = maximize_over_composition(w, m, rate, Family::r, opt, simplex_denominator);
    c.max_linear = lin.value;
    c.max_random = rnd.value;
    c.p_linear = lin.p;
    c.p_random = rnd.p;
    c.gap = std::abs(lin.value - rnd.value);
    c.pass = std::isfinite(c.gap) && c.gap <= tolerance;
    return c;
}

}  // namespace relexp::dmc
