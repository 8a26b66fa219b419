#include "relexp/mac/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include "relexp/core/info.hpp"
#include "relexp/opt/program.hpp"

namespace relexp::mac {

std::string branch_name(Branch b) {
    switch (b) {
        case Branch::X: return "X";
        case Branch::Y: return "Y";
        case Branch::XY: return "XY";
    }
    return "?";
}

void validate(const Input& in, double tol) {
    if (in.p.rank() != 3) throw InputError("input distribution must be over (U, X, Y)");
    if (in.w.rank() != 3) throw InputError("channel must be over (X, Y, Z)");
    if (in.p.dim(1) != in.w.dim(0) || in.p.dim(2) != in.w.dim(1))
        throw InputError("input distribution alphabets do not match the channel");
    if (!in.p.is_distribution(tol)) throw InputError("input distribution must be nonnegative and sum to 1");
    check_conditional(in.w, 2, tol, "channel");
    if (in.rx < 0 || in.ry < 0) throw InputError("rates must be nonnegative");
    if (in.metric != Metric::min_equivocation)
        throw InputError("two-user exponents support the min-equivocation metric only");
    int nu = in.p.dim(0), nx = in.p.dim(1), ny = in.p.dim(2);
    Joint pu = in.p.marginal({0}), pux = in.p.marginal({0, 1}), puy = in.p.marginal({0, 2});
    for (int u = 0; u < nu; ++u) {
        double m = pu[static_cast<std::size_t>(u)];
        if (!(m > 0)) continue;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                double joint = in.p.at({u, x, y}) / m;
                double prod = pux.at({u, x}) / m * puy.at({u, y}) / m;
                if (std::abs(joint - prod) > tol) throw InputError("input distribution violates X - U - Y");
            }
    }
}

std::vector<int> branch_dims(Branch b, const Input& in) {
    int nu = in.p.dim(0), nx = in.p.dim(1), ny = in.p.dim(2), nz = in.w.dim(2);
    switch (b) {
        case Branch::X: return {nu, nx, ny, nx, nz};
        case Branch::Y: return {nu, nx, ny, ny, nz};
        case Branch::XY: return {nu, nx, ny, nx, ny, nz};
    }
    return {};
}

Roles branch_roles(Branch b) {
    Roles r = roles_uxy();
    switch (b) {
        case Branch::X:
            r.xt = 3;
            r.z = 4;
            break;
        case Branch::Y:
            r.yt = 3;
            r.z = 4;
            break;
        case Branch::XY:
            r.xt = 3;
            r.yt = 4;
            r.z = 5;
            break;
    }
    return r;
}

Roles reference_roles() {
    Roles r = roles_uxy();
    r.z = 3;
    return r;
}

namespace {

using opt::Functional;

bool has_floor(Family f) { return f == Family::rL || f == Family::TL; }

double cap_for(Family f, const Input& in) {
    switch (f) {
        case Family::T:
        case Family::TL: return in.rx + in.ry;
        case Family::ex: return std::min(in.rx, in.ry);
        default: return kInf;
    }
}

void for_each_cell(const std::vector<int>& dims, const std::function<void(const std::vector<int>&, std::size_t)>& fn) {
    std::size_t n = cell_count(dims);
    std::vector<int> c(dims.size(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        fn(c, k);
        for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
            auto ua = static_cast<std::size_t>(a);
            if (++c[ua] < dims[ua]) break;
            c[ua] = 0;
        }
    }
}

// Functionals and slice of one problem layout.
struct Layout {
    const Input& in;
    std::vector<int> dims;
    Roles r;

    Functional divergence() const {
        Functional d;
        d.add_entropy({r.u, r.x, r.y}).add_entropy({r.u, r.x, r.y, r.z}, -1.0);
        d.linear.assign(cell_count(dims), 0.0);
        for_each_cell(dims, [&](const std::vector<int>& c, std::size_t k) {
            double wv = in.w.at({c[static_cast<std::size_t>(r.x)], c[static_cast<std::size_t>(r.y)],
                                 c[static_cast<std::size_t>(r.z)]});
            if (wv > 0) d.linear[k] = -std::log2(wv);
        });
        return d;
    }

    Functional mi(const Axes& a, const Axes& b) const {
        Functional f;
        f.add_mutual_info(a, b, {r.u});
        return f;
    }

    opt::Slice slice() const {
        opt::Slice s;
        s.dims = dims;
        Joint pux = in.p.marginal({0, 1}), puy = in.p.marginal({0, 2});
        std::vector<double> tx(pux.mass().begin(), pux.mass().end()), ty(puy.mass().begin(), puy.mass().end());
        s.pins.push_back({{r.u, r.x}, tx});
        s.pins.push_back({{r.u, r.y}, ty});
        if (r.xt >= 0) s.pins.push_back({{r.u, r.xt}, tx});
        if (r.yt >= 0) s.pins.push_back({{r.u, r.yt}, ty});
        s.support.assign(s.cells(), 1);
        for_each_cell(dims, [&](const std::vector<int>& c, std::size_t k) {
            double wv = in.w.at({c[static_cast<std::size_t>(r.x)], c[static_cast<std::size_t>(r.y)],
                                 c[static_cast<std::size_t>(r.z)]});
            if (!(wv > 0)) s.support[k] = 0;
        });
        return s;
    }

    // Point built from a per-cell rule (missing roles read as -1).
    std::vector<double> point(const std::function<double(int u, int x, int y, int xt, int yt, int z)>& f) const {
        std::vector<double> v(cell_count(dims), 0.0);
        auto at = [](const std::vector<int>& c, int role) { return role >= 0 ? c[static_cast<std::size_t>(role)] : -1; };
        for_each_cell(dims, [&](const std::vector<int>& c, std::size_t k) {
            v[k] = f(at(c, r.u), at(c, r.x), at(c, r.y), at(c, r.xt), at(c, r.yt), at(c, r.z));
        });
        return v;
    }
};

Layout branch_layout(Branch b, const Input& in) { return {in, branch_dims(b, in), branch_roles(b)}; }
Layout reference_layout(const Input& in) {
    return {in, {in.p.dim(0), in.p.dim(1), in.p.dim(2), in.w.dim(2)}, reference_roles()};
}

Functional branch_excess(Branch b, const Layout& l) {
    const Roles& r = l.r;
    const Input& in = l.in;
    switch (b) {
        case Branch::X: return l.mi({r.xt}, {r.x, r.y, r.z}).add_constant(-in.rx);
        case Branch::Y: return l.mi({r.yt}, {r.x, r.y, r.z}).add_constant(-in.ry);
        case Branch::XY:
            return l.mi({r.xt, r.yt}, {r.x, r.y, r.z}).add(l.mi({r.xt}, {r.yt})).add_constant(-in.rx - in.ry);
    }
    return {};
}

// alpha of the competing pair minus alpha of the sent pair, both H(..|ZU).
Functional alpha_gap(Branch b, const Layout& l) {
    const Roles& r = l.r;
    int cx = b == Branch::Y ? r.x : r.xt;
    int cy = b == Branch::X ? r.y : r.yt;
    Functional f;
    f.add_cond_entropy({cx, cy}, {r.u, r.z}).add_cond_entropy({r.x, r.y}, {r.u, r.z}, -1.0);
    return f;
}

std::vector<opt::Constraint> branch_caps(Branch b, const Layout& l, double cap) {
    const Roles& r = l.r;
    const Input& in = l.in;
    auto fu = [&](int x, int y) { return l.mi({x}, {y}); };
    // F_X with the roles (X, Y, X~) played by (a, c, t)
    auto fx = [&](int a, int c, int t) { return fu(a, c).add(l.mi({t}, {a, c})).add_constant(-in.rx); };
    auto fy = [&](int a, int c, int t) { return fu(a, c).add(l.mi({t}, {a, c})).add_constant(-in.ry); };
    auto fxy = [&](int a, int c, int ta, int tc) {
        return fu(a, c).add(fu(ta, tc)).add(l.mi({ta, tc}, {a, c})).add_constant(-in.rx - in.ry);
    };
    std::vector<opt::Constraint> out;
    auto add = [&](std::string label, Functional f) { out.push_back({std::move(label), f.add_constant(-cap), 0.0}); };
    switch (b) {
        case Branch::X:
            add("F_U(U,X,Y)", fu(r.x, r.y));
            add("F_U(U,X~,Y)", fu(r.xt, r.y));
            add("F_X(U,X,Y,X~)", fx(r.x, r.y, r.xt));
            break;
        case Branch::Y:
            add("F_U(U,X,Y)", fu(r.x, r.y));
            add("F_U(U,X,Y~)", fu(r.x, r.yt));
            add("F_Y(U,X,Y,Y~)", fy(r.x, r.y, r.yt));
            break;
        case Branch::XY:
            add("F_U(U,X,Y)", fu(r.x, r.y));
            add("F_U(U,X~,Y)", fu(r.xt, r.y));
            add("F_U(U,X,Y~)", fu(r.x, r.yt));
            add("F_U(U,X~,Y~)", fu(r.xt, r.yt));
            add("F_X(U,X,Y,X~)", fx(r.x, r.y, r.xt));
            add("F_X(U,X,Y~,X~)", fx(r.x, r.yt, r.xt));
            add("F_Y(U,X,Y,Y~)", fy(r.x, r.y, r.yt));
            add("F_Y(U,X~,Y,Y~)", fy(r.xt, r.y, r.yt));
            add("F_XY(U,X,Y,X~,Y~)", fxy(r.x, r.y, r.xt, r.yt));
            add("F_XY(U,X~,Y,X,Y~)", fxy(r.xt, r.y, r.x, r.yt));
            break;
    }
    return out;
}

opt::Composite family_composite(Family f, Branch b, const Layout& l) {
    opt::Composite c;
    c.base = l.divergence().add(l.mi({l.r.x}, {l.r.y}));
    c.excess = branch_excess(b, l);
    c.linear = has_floor(f);
    c.constraints.push_back({"alpha", alpha_gap(b, l), kTieWindow});
    double cap = cap_for(f, l.in);
    if (cap < kInf)
        for (auto& k : branch_caps(b, l, cap)) c.constraints.push_back(std::move(k));
    return c;
}

opt::Composite reference_composite(Branch b, const Layout& l) {
    const Roles& r = l.r;
    const Input& in = l.in;
    opt::Composite c;
    c.base = l.divergence().add(l.mi({r.x}, {r.y}));
    switch (b) {
        case Branch::X: c.excess = l.mi({r.x}, {r.y, r.z}).add_constant(-in.rx); break;
        case Branch::Y: c.excess = l.mi({r.y}, {r.x, r.z}).add_constant(-in.ry); break;
        case Branch::XY: c.excess = l.mi({r.x, r.y}, {r.z}).add(l.mi({r.x}, {r.y})).add_constant(-in.rx - in.ry); break;
    }
    return c;
}

std::uint64_t mix_seed(std::uint64_t seed, int a, int b) {
    std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL + 0x7F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(a) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(b) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
    return h;
}

// Independent competitors, copies of the sent words, and their blends.
std::vector<std::vector<double>> special_points(Branch b, const Layout& l) {
    const Input& in = l.in;
    Joint pu = in.p.marginal({0}), pux = in.p.marginal({0, 1}), puy = in.p.marginal({0, 2});
    auto cx = [&](int u, int x) {
        double m = pu[static_cast<std::size_t>(u)];
        return m > 0 ? pux.at({u, x}) / m : 0.0;
    };
    auto cy = [&](int u, int y) {
        double m = pu[static_cast<std::size_t>(u)];
        return m > 0 ? puy.at({u, y}) / m : 0.0;
    };
    // mode bits: 1 = copy X~ from X, 2 = copy Y~ from Y
    auto make = [&](int mode) {
        return l.point([&](int u, int x, int y, int xt, int yt, int z) {
            double v = in.p.at({u, x, y}) * in.w.at({x, y, z});
            if (xt >= 0) v *= (mode & 1) ? (xt == x ? 1.0 : 0.0) : cx(u, xt);
            if (yt >= 0) v *= (mode & 2) ? (yt == y ? 1.0 : 0.0) : cy(u, yt);
            return v;
        });
    };
    std::vector<int> modes = b == Branch::XY ? std::vector<int>{0, 1, 2, 3} : std::vector<int>{0, 3};
    std::vector<std::vector<double>> out;
    for (int m : modes) out.push_back(make(m));
    std::size_t base = out.size();
    for (std::size_t k = 1; k < base; ++k) {
        std::vector<double> mix(out[0].size());
        for (std::size_t c = 0; c < mix.size(); ++c) mix[c] = 0.5 * (out[0][c] + out[k][c]);
        out.push_back(std::move(mix));
    }
    return out;
}

// Branch points that copy a reference-layout table v(u,x,y,z): the competing
// words are drawn like the sent ones given (U, Z) and the untouched word, so
// the metric ties and the excess matches the reference excess.
std::vector<double> coupled_point(Branch b, const Layout& l, const Joint& v) {
    Joint uz = v.marginal({0, 3}), uyz = v.marginal({0, 2, 3}), uxz = v.marginal({0, 1, 3});
    return l.point([&](int u, int x, int y, int xt, int yt, int z) {
        double a = v.at({u, x, y, z});
        switch (b) {
            case Branch::X: {
                double m = uyz.at({u, y, z});
                return m > 0 ? a * v.at({u, xt, y, z}) / m : 0.0;
            }
            case Branch::Y: {
                double m = uxz.at({u, x, z});
                return m > 0 ? a * v.at({u, x, yt, z}) / m : 0.0;
            }
            case Branch::XY: {
                double m = uz.at({u, z});
                return m > 0 ? a * v.at({u, xt, yt, z}) / m : 0.0;
            }
        }
        return 0.0;
    });
}

// Largest usable lattice denominator, or 0.
int lattice_denominator(const opt::Slice& s, const Options& opt) {
    if (opt.grid_denominator <= 0 || static_cast<int>(s.cells()) > opt.max_lattice_cells) return 0;
    for (int n = opt.grid_denominator; n >= 2; --n) {
        if (count_types(s.cells(), n) > opt.max_lattice_points) continue;
        bool ok = true;
        for (const auto& pin : s.pins)
            for (double t : pin.target) ok = ok && std::abs(t * n - std::round(t * n)) < 1e-9;
        if (ok) return n;
    }
    return 0;
}

BranchResult finish(Branch b, const std::vector<int>& dims, opt::CompositeEvaluator& ev, const std::vector<double>& x,
                    double value, opt::Certificate cert) {
    BranchResult r;
    r.branch = b;
    r.value = std::max(0.0, value);  // rounding can leave -1e-16
    r.feasible = true;
    r.argmin = Joint(dims, x);
    r.active = ev.active(x);
    r.cert = std::move(cert);
    return r;
}

std::vector<BranchResult> solve_branch(const Input& in, Branch b, const std::vector<Family>& fams, const Options& opt,
                                       const std::vector<Joint>& references) {
    Layout l = branch_layout(b, in);
    opt::Slice slice = l.slice();
    std::vector<opt::Composite> comps;
    std::vector<std::unique_ptr<opt::CompositeEvaluator>> evs;
    for (Family f : fams) {
        comps.push_back(family_composite(f, b, l));
        evs.push_back(std::make_unique<opt::CompositeEvaluator>(l.dims, comps.back()));
    }

    std::vector<std::vector<double>> common = special_points(b, l);
    for (const auto& v : references) common.push_back(coupled_point(b, l, v));
    std::vector<opt::Certificate> certs(fams.size());
    std::vector<std::vector<std::vector<double>>> lattice_seeds(fams.size());
    if (int n = lattice_denominator(slice, opt); n > 0) {
        std::vector<std::vector<std::pair<double, std::vector<double>>>> best(fams.size());
        std::size_t keep = static_cast<std::size_t>(std::max(opt.lattice_seeds, 0));
        opt::for_each_lattice_point(slice, n, [&](std::span<const double> x) {
            for (std::size_t k = 0; k < fams.size(); ++k) {
                ++certs[k].lattice_points;
                if (evs[k]->violation(x) > 0) continue;
                double v = evs[k]->objective(x);
                if (!std::isfinite(v)) continue;
                ++certs[k].lattice_feasible;
                auto& bk = best[k];
                if (bk.size() < keep || v < bk.back().first) {
                    bk.push_back({v, std::vector<double>(x.begin(), x.end())});
                    std::sort(bk.begin(), bk.end(), [](const auto& a, const auto& c) { return a.first < c.first; });
                    if (bk.size() > keep) bk.pop_back();
                }
            }
        });
        for (std::size_t k = 0; k < fams.size(); ++k) {
            certs[k].lattice_denominator = n;
            if (!best[k].empty()) certs[k].lattice_value = best[k].front().first;
            for (auto& e : best[k]) lattice_seeds[k].push_back(std::move(e.second));
        }
    }

    std::vector<BranchResult> out(fams.size());
    std::vector<std::vector<double>> pool;
    for (std::size_t k = 0; k < fams.size(); ++k) {
        opt::Problem prob = opt::make_problem(slice, comps[k]);
        opt::SolveOptions so;
        so.restarts = opt.restarts;
        so.search = opt.search;
        so.seed = mix_seed(opt.seed, static_cast<int>(fams[k]), static_cast<int>(b));
        so.seeds = common;
        for (auto& s : lattice_seeds[k]) so.seeds.push_back(s);
        opt::SolveResult sr = opt::minimize(prob, so);
        opt::Certificate cert = sr.cert;
        cert.lattice_value = certs[k].lattice_value;
        cert.lattice_points = certs[k].lattice_points;
        cert.lattice_feasible = certs[k].lattice_feasible;
        cert.lattice_denominator = certs[k].lattice_denominator;
        out[k].branch = b;
        out[k].cert = cert;
        if (sr.feasible) {
            out[k] = finish(b, l.dims, *evs[k], sr.argmin, sr.value, cert);
            pool.push_back(sr.argmin);
            common.push_back(sr.argmin);  // later families start from it too
        }
    }
    for (std::size_t k = 0; k < fams.size(); ++k) {
        for (const auto& x : pool) {
            if (evs[k]->violation(x) > 0) continue;
            double v = evs[k]->objective(x);
            if (v < out[k].value) out[k] = finish(b, l.dims, *evs[k], x, v, out[k].cert);
        }
    }
    return out;
}

double divergence_term(const Joint& v, const Roles& r, const Input& in) {
    Joint m = v.marginal({r.u, r.x, r.y, r.z});
    Joint uxy = v.marginal({r.u, r.x, r.y});
    double d = 0;
    int nu = m.dim(0), nx = m.dim(1), ny = m.dim(2), nz = m.dim(3);
    for (int u = 0; u < nu; ++u)
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                for (int z = 0; z < nz; ++z) {
                    double p = m.at({u, x, y, z});
                    if (!(p > 0)) continue;
                    double wv = in.w.at({x, y, z});
                    if (!(wv > 0)) return kInf;
                    d += p * std::log2(p / uxy.at({u, x, y}) / wv);
                }
    return std::max(0.0, d);
}

}  // namespace

double objective(Branch b, const Joint& v, const Input& in, bool linear) {
    Roles r = branch_roles(b);
    double base = add_inf(divergence_term(v, r, in), f_u(v, r));
    double j = 0;
    switch (b) {
        case Branch::X: j = mutual_info(v, {r.xt}, {r.x, r.y, r.z}, {r.u}) - in.rx; break;
        case Branch::Y: j = mutual_info(v, {r.yt}, {r.x, r.y, r.z}, {r.u}) - in.ry; break;
        case Branch::XY:
            j = mutual_info(v, {r.xt, r.yt}, {r.x, r.y, r.z}, {r.u}) + mutual_info(v, {r.xt}, {r.yt}, {r.u}) - in.rx -
                in.ry;
            break;
    }
    return add_inf(base, linear ? j : positive_part(j));
}

bool membership(Family f, Branch b, const Joint& v, const Input& in, double tol, std::vector<std::string>* violated) {
    Roles r = branch_roles(b);
    bool ok = true;
    auto fail = [&](const std::string& label) {
        ok = false;
        if (violated) violated->push_back(label);
    };
    if (v.dims() != branch_dims(b, in) || !v.is_distribution(tol)) {
        fail("shape");
        return false;
    }
    Joint pux = in.p.marginal({0, 1}), puy = in.p.marginal({0, 2});
    if (v.marginal({r.u, r.x}).max_abs_diff(pux) > tol) fail("marginal U,X");
    if (v.marginal({r.u, r.y}).max_abs_diff(puy) > tol) fail("marginal U,Y");
    if (r.xt >= 0 && v.marginal({r.u, r.xt}).max_abs_diff(pux) > tol) fail("marginal U,X~");
    if (r.yt >= 0 && v.marginal({r.u, r.yt}).max_abs_diff(puy) > tol) fail("marginal U,Y~");

    Roles cand = r;
    if (b != Branch::Y) cand.x = r.xt;
    if (b != Branch::X) cand.y = r.yt;
    if (!alpha_leq(alpha_equivocation(v, cand), alpha_equivocation(v, r))) fail("alpha");

    double cap = cap_for(f, in);
    if (cap < kInf) {
        auto check = [&](const char* label, double value) {
            if (value > cap + tol) fail(label);
        };
        auto swap = [](Roles q, int x, int y, int xt, int yt) {
            q.x = x;
            q.y = y;
            q.xt = xt;
            q.yt = yt;
            return q;
        };
        check("F_U(U,X,Y)", f_u(v, r));
        if (b != Branch::Y) check("F_U(U,X~,Y)", f_u(v, swap(r, r.xt, r.y, -1, -1)));
        if (b != Branch::X) check("F_U(U,X,Y~)", f_u(v, swap(r, r.x, r.yt, -1, -1)));
        if (b == Branch::X) check("F_X(U,X,Y,X~)", f_x(v, r, in.rx));
        if (b == Branch::Y) check("F_Y(U,X,Y,Y~)", f_y(v, r, in.ry));
        if (b == Branch::XY) {
            check("F_U(U,X~,Y~)", f_u(v, swap(r, r.xt, r.yt, -1, -1)));
            check("F_X(U,X,Y,X~)", f_x(v, swap(r, r.x, r.y, r.xt, -1), in.rx));
            check("F_X(U,X,Y~,X~)", f_x(v, swap(r, r.x, r.yt, r.xt, -1), in.rx));
            check("F_Y(U,X,Y,Y~)", f_y(v, swap(r, r.x, r.y, -1, r.yt), in.ry));
            check("F_Y(U,X~,Y,Y~)", f_y(v, swap(r, r.xt, r.y, -1, r.yt), in.ry));
            check("F_XY(U,X,Y,X~,Y~)", f_xy(v, r, in.rx, in.ry));
            check("F_XY(U,X~,Y,X,Y~)", f_xy(v, swap(r, r.xt, r.y, r.x, r.yt), in.rx, in.ry));
        }
    }
    if (has_floor(f)) {
        double lin = objective(b, v, in, true) - objective(b, v, in, false);
        if (lin < -tol) fail("floor");
    }
    return ok;
}

std::vector<Result> compute_exponents(const Input& in, const std::vector<Family>& families, const Options& opt) {
    validate(in);
    std::vector<Result> out(families.size());
    for (std::size_t k = 0; k < families.size(); ++k) out[k].family = families[k];
    // the reference problem is convex and cheap; its minimizers seed every branch
    std::vector<Joint> references;
    for (const auto& br : reference_exponent(in, opt).branches)
        if (br.feasible) references.push_back(br.argmin);
    for (std::size_t bi = 0; bi < kBranches.size(); ++bi) {
        auto br = solve_branch(in, kBranches[bi], families, opt, references);
        for (std::size_t k = 0; k < families.size(); ++k) out[k].branches[bi] = std::move(br[k]);
    }
    for (auto& r : out) {
        for (std::size_t bi = 0; bi < kBranches.size(); ++bi)
            if (r.branches[bi].value < r.value) {
                r.value = r.branches[bi].value;
                r.winner = kBranches[bi];
            }
    }
    return out;
}

Result compute_exponent(const Input& in, Family f, const Options& opt) { return compute_exponents(in, {f}, opt).front(); }

double reference_objective(Branch b, const Joint& v, const Input& in) {
    Roles r = reference_roles();
    double base = add_inf(divergence_term(v, r, in), f_u(v, r));
    double j = 0;
    switch (b) {
        case Branch::X: j = mutual_info(v, {r.x}, {r.y, r.z}, {r.u}) - in.rx; break;
        case Branch::Y: j = mutual_info(v, {r.y}, {r.x, r.z}, {r.u}) - in.ry; break;
        case Branch::XY: j = mutual_info(v, {r.x, r.y}, {r.z}, {r.u}) + f_u(v, r) - in.rx - in.ry; break;
    }
    return add_inf(base, positive_part(j));
}

ReferenceResult reference_exponent(const Input& in, const Options& opt) {
    validate(in);
    Layout l = reference_layout(in);
    opt::Slice slice = l.slice();
    std::vector<double> natural =
        l.point([&](int u, int x, int y, int, int, int z) { return in.p.at({u, x, y}) * in.w.at({x, y, z}); });
    ReferenceResult res;
    for (std::size_t bi = 0; bi < kBranches.size(); ++bi) {
        Branch b = kBranches[bi];
        opt::Composite c = reference_composite(b, l);
        opt::CompositeEvaluator ev(l.dims, c);
        opt::Problem prob = opt::make_problem(slice, c);
        opt::SolveOptions so;
        so.restarts = opt.restarts;
        so.search = opt.search;
        so.seed = mix_seed(opt.seed, 100, static_cast<int>(b));
        so.seeds = {natural};
        opt::SolveResult sr = opt::minimize(prob, so);
        BranchResult& br = res.branches[bi];
        br.branch = b;
        br.cert = sr.cert;
        if (sr.feasible) br = finish(b, l.dims, ev, sr.argmin, sr.value, sr.cert);
        if (br.value < res.value) {
            res.value = br.value;
            res.winner = b;
        }
    }
    return res;
}

Comparison compare_with_reference(const Input& in, const Options& opt, double tolerance) {
    Comparison c;
    auto fams = compute_exponents(in, {Family::r, Family::T, Family::ex}, opt);
    ReferenceResult ref = reference_exponent(in, opt);
    c.e_r = fams[0].value;
    c.e_t = fams[1].value;
    c.e_ex = fams[2].value;
    c.reference = ref.value;
    c.gap_r = c.e_r - c.reference;
    c.gap_t = c.e_t - c.reference;
    c.gap_ex = c.e_ex - c.reference;
    c.ordered = c.e_ex >= c.e_t - 1e-9 && c.e_t >= c.e_r - 1e-9;
    c.pass = c.ordered && c.gap_r >= -tolerance && c.gap_t >= -tolerance && c.gap_ex >= -tolerance;
    return c;
}

Joint sample_input_distribution(int nu, int nx, int ny, Rng& rng) {
    std::gamma_distribution<double> g(1.0, 1.0);
    auto dirichlet = [&](int k) {
        std::vector<double> v(static_cast<std::size_t>(k));
        double s = 0;
        for (double& e : v) s += (e = g(rng) + 1e-300);
        for (double& e : v) e /= s;
        return v;
    };
    std::vector<double> pu = dirichlet(nu);
    Joint p = Joint::zeros({nu, nx, ny});
    for (int u = 0; u < nu; ++u) {
        auto px = dirichlet(nx), py = dirichlet(ny);
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                p.at({u, x, y}) = pu[static_cast<std::size_t>(u)] * px[static_cast<std::size_t>(x)] *
                                  py[static_cast<std::size_t>(y)];
    }
    return p;
}

}  // namespace relexp::mac
