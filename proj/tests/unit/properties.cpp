#include "unit/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "relexp/core/info.hpp"
#include "relexp/core/types.hpp"
#include "unit/oracles.hpp"

namespace properties {

using relexp::Joint;

namespace {

struct Tracker {
    Outcome o;
    double tol;
    void add(double err) {
        ++o.instances;
        err = std::isnan(err) ? std::numeric_limits<double>::infinity() : std::abs(err);
        o.max_error = std::max(o.max_error, err);
        if (err > tol) ++o.failures;
    }
};

Joint to_joint(const oracle::Table& t) { return Joint(t.dims, t.m); }

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

oracle::Table random_joint(std::mt19937_64& rng, const std::vector<int>& dims) {
    double zero = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? 0.3 : 0.0;
    return oracle::random_table(dims, rng, zero);
}

std::vector<int> random_counts(std::mt19937_64& rng, int k, int n) {
    std::vector<int> c(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) ++c[static_cast<std::size_t>(pick(rng, 0, k - 1))];
    return c;
}

// number of sequences b with the same joint type with a as b0
std::int64_t brute_shell(const std::vector<int>& a, const std::vector<int>& b0, int ka, int kb) {
    std::vector<int> target = oracle::counts({&a, &b0}, {ka, kb});
    std::vector<int> b(a.size(), 0);
    std::int64_t hits = 0;
    while (true) {
        if (oracle::counts({&a, &b}, {ka, kb}) == target) ++hits;
        int pos = static_cast<int>(b.size()) - 1;
        while (pos >= 0 && ++b[static_cast<std::size_t>(pos)] == kb) b[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return hits;
}

}  // namespace

std::vector<Outcome> run_suite(int instances, std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    auto make = [&](const char* name) { return Tracker{{name, 0, 0, 0}, tol}; };
    Tracker chain_h = make("entropy chain rule"), chain_i = make("mutual information chain rule"),
            nonneg = make("nonnegativity of H, I, D"), agree = make("entropy and information against oracle"),
            zero_i = make("I = 0 exactly for product tables"), zero_d = make("D = 0 exactly for equal tables"),
            pos = make("I > 0 and D > 0 for generic tables"), cdiv = make("conditional divergence decomposition"),
            tcount = make("type class size"), tbound = make("type class size bounds"),
            shell = make("conditional shell size"), tenum = make("type enumeration"),
            couple = make("coupling identity, one user"), couple_mac = make("coupling identity, two users");

    for (int it = 0; it < instances; ++it) {
        // three-axis tables
        std::vector<int> dims{pick(rng, 2, 3), pick(rng, 2, 3), pick(rng, 2, 3)};
        oracle::Table t = random_joint(rng, dims);
        Joint j = to_joint(t);

        double h = relexp::entropy(j);
        chain_h.add(h - (relexp::entropy(j, {0}) + relexp::cond_entropy(j, {1}, {0}) +
                         relexp::cond_entropy(j, {2}, {0, 1})));
        chain_i.add(relexp::mutual_info(j, {0}, {1, 2}) -
                    (relexp::mutual_info(j, {0}, {1}) + relexp::mutual_info(j, {0}, {2}, {1})));

        oracle::Table q = oracle::random_table(dims, rng);
        double d = relexp::divergence(j, to_joint(q));
        nonneg.add(std::min({0.0, h, relexp::mutual_info(j, {0}, {2}, {1}), relexp::cond_entropy(j, {2}, {0, 1}),
                             std::isinf(d) ? 0.0 : d}));

        agree.add(std::max({std::abs(h - oracle::entropy(t)),
                            std::abs(relexp::mutual_info(j, {0}, {2}, {1}) - oracle::mutual_info(t, {0}, {2}, {1})),
                            std::abs(relexp::cond_entropy(j, {1, 2}, {0}) - oracle::cond_entropy(t, {1, 2}, {0})),
                            std::abs(d - oracle::divergence(t.m, q.m))}));

        // product table: I(A;B) = 0
        oracle::Table a = random_joint(rng, {dims[0]}), b = random_joint(rng, {dims[1]});
        Joint prod = Joint::product(to_joint(a), to_joint(b));
        zero_i.add(relexp::mutual_info(prod, {0}, {1}));
        zero_d.add(relexp::divergence(j, j));

        // a strictly positive table that is not a product has I > 0, and q != p has D > 0
        oracle::Table g = oracle::random_table({dims[0], dims[1]}, rng);
        double ig = relexp::mutual_info(to_joint(g), {0}, {1});
        double dg = relexp::divergence(to_joint(g), to_joint(oracle::random_table(g.dims, rng)));
        pos.add(ig > 0 && dg > 0 ? 0.0 : 1.0);

        // D(V || W | P) = sum_x P(x) D(V(.|x) || W(.|x))
        {
            int nx = dims[0], ny = dims[1];
            oracle::Table p = oracle::random_table({nx}, rng);
            std::vector<double> v, w;
            for (int x = 0; x < nx; ++x) {
                oracle::Table rv = oracle::random_table({ny}, rng), rw = oracle::random_table({ny}, rng);
                v.insert(v.end(), rv.m.begin(), rv.m.end());
                w.insert(w.end(), rw.m.begin(), rw.m.end());
            }
            double expect = 0;
            for (int x = 0; x < nx; ++x) {
                std::vector<double> vr(v.begin() + x * ny, v.begin() + (x + 1) * ny);
                std::vector<double> wr(w.begin() + x * ny, w.begin() + (x + 1) * ny);
                expect += p.m[static_cast<std::size_t>(x)] * oracle::divergence(vr, wr);
            }
            cdiv.add(relexp::cond_divergence(Joint({nx, ny}, v), Joint({nx, ny}, w), to_joint(p)) - expect);
        }

        // type classes
        {
            int k = pick(rng, 2, 3), n = pick(rng, 1, k == 2 ? 10 : 7);
            std::vector<int> c = random_counts(rng, k, n);
            double brute = static_cast<double>(oracle::brute_type_class_size(c));
            tcount.add(std::max(std::abs(relexp::multinomial(c) - brute) / brute,
                                std::abs(relexp::log2_multinomial(c) - std::log2(brute))));
            double hp = 0;
            for (int ci : c)
                if (ci) hp -= ci * std::log2(static_cast<double>(ci) / n);
            double lb = hp - k * std::log2(n + 1.0);
            tbound.add(std::max({0.0, std::log2(brute) - hp, lb - std::log2(brute)}));
        }
        {
            int ka = pick(rng, 2, 3), kb = pick(rng, 2, 3), n = pick(rng, 1, 6);
            std::vector<int> sa(static_cast<std::size_t>(n)), sb(static_cast<std::size_t>(n));
            for (int& v : sa) v = pick(rng, 0, ka - 1);
            for (int& v : sb) v = pick(rng, 0, kb - 1);
            std::vector<int> c = oracle::counts({&sa, &sb}, {ka, kb});
            double brute = static_cast<double>(brute_shell(sa, sb, ka, kb));
            shell.add(std::abs(relexp::shell_size(c, static_cast<std::size_t>(kb)) - brute) / brute);
        }
        {
            int ka = pick(rng, 2, 3), kb = 2, n = pick(rng, 1, 5);
            std::vector<int> dd{ka, kb};
            auto all = relexp::enumerate_types(dd, n);
            double err = std::abs(static_cast<double>(all.size()) - relexp::count_types(static_cast<std::size_t>(ka * kb), n));
            // pinned enumeration equals the filtered full enumeration
            std::vector<int> pin = random_counts(rng, ka, n);
            std::set<std::vector<int>> filtered;
            for (const auto& v : all) {
                std::vector<int> row(static_cast<std::size_t>(ka), 0);
                for (int x = 0; x < ka; ++x)
                    for (int y = 0; y < kb; ++y) row[static_cast<std::size_t>(x)] += v[static_cast<std::size_t>(x * kb + y)];
                if (row == pin) filtered.insert(v);
            }
            auto pinned = relexp::enumerate_types(dd, n, {{{0}, pin}});
            std::set<std::vector<int>> got(pinned.begin(), pinned.end());
            if (got != filtered || got.size() != pinned.size()) err += 1;
            tenum.add(err);
        }

        // V* = V(t|x,y) V(h|x,y) V(x,y) has V*_{X X^ Y} = V and I(X^; X X~ Y) = I(X~; X Y);
        // any other coupling with that marginal gives at least I(X~; X Y)
        {
            int nx = pick(rng, 2, 3), ny = pick(rng, 2, 3);
            Joint v = to_joint(random_joint(rng, {nx, nx, ny}));
            Joint vxy = v.marginal({0, 2});
            Joint star = Joint::zeros({nx, nx, nx, ny}), ident = Joint::zeros({nx, nx, nx, ny});
            for (int x = 0; x < nx; ++x)
                for (int y = 0; y < ny; ++y) {
                    double m = vxy.at({x, y});
                    for (int s = 0; s < nx; ++s)
                        for (int u = 0; u < nx; ++u) {
                            if (m > 0) star.at({x, s, u, y}) = v.at({x, s, y}) * v.at({x, u, y}) / m;
                            if (s == u) ident.at({x, s, u, y}) = v.at({x, s, y});
                        }
                }
            double target = relexp::mutual_info(v, {1}, {0, 2});
            double err = star.marginal({0, 2, 3}).max_abs_diff(v);
            err = std::max(err, std::abs(relexp::mutual_info(star, {2}, {0, 1, 3}) - target));
            double theta = std::uniform_real_distribution<double>(0, 1)(rng);
            Joint mix = star;
            for (std::size_t c = 0; c < mix.size(); ++c) mix[c] = theta * star[c] + (1 - theta) * ident[c];
            err = std::max(err, mix.marginal({0, 2, 3}).max_abs_diff(v));
            err = std::max(err, std::max(0.0, target - relexp::mutual_info(mix, {2}, {0, 1, 3})));
            couple.add(err);
        }
        {
            // axes (U, X, Y, X~, Z); V* adds X^ before Z
            std::vector<int> dm{pick(rng, 1, 2), 2, 2, 2, 2};
            Joint v = to_joint(random_joint(rng, dm));
            Joint base = v.marginal({0, 1, 2, 4});
            Joint star = Joint::zeros({dm[0], 2, 2, 2, 2, 2});
            for (int u = 0; u < dm[0]; ++u)
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y)
                        for (int z = 0; z < 2; ++z) {
                            double m = base.at({u, x, y, z});
                            if (!(m > 0)) continue;
                            for (int s = 0; s < 2; ++s)
                                for (int hh = 0; hh < 2; ++hh)
                                    star.at({u, x, y, s, hh, z}) = v.at({u, x, y, s, z}) * v.at({u, x, y, hh, z}) / m;
                        }
            double target = relexp::mutual_info(v, {3}, {1, 2, 4}, {0});
            double err = star.marginal({0, 1, 2, 4, 5}).max_abs_diff(v);
            err = std::max(err, std::abs(relexp::mutual_info(star, {4}, {1, 2, 3, 5}, {0}) - target));
            couple_mac.add(err);
        }
    }
    std::vector<Outcome> out;
    for (Tracker* tr : {&chain_h, &chain_i, &nonneg, &agree, &zero_i, &zero_d, &pos, &cdiv, &tcount, &tbound, &shell,
                        &tenum, &couple, &couple_mac})
        out.push_back(tr->o);
    return out;
}

}  // namespace properties
