#include "unit/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <limits>
#include <stdexcept>

namespace oracle {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

double Table::total() const { return std::accumulate(m.begin(), m.end(), 0.0); }

Table Table::marginal(const std::vector<int>& axes) const {
    Table out;
    for (int a : axes) out.dims.push_back(dims[static_cast<std::size_t>(a)]);
    std::size_t cells = 1;
    for (int d : out.dims) cells *= static_cast<std::size_t>(d);
    out.m.assign(cells, 0.0);
    std::vector<int> c(dims.size(), 0);
    for (std::size_t flat = 0; flat < m.size(); ++flat) {
        std::size_t rest = flat;
        for (std::size_t k = dims.size(); k-- > 0;) {
            c[k] = static_cast<int>(rest % static_cast<std::size_t>(dims[k]));
            rest /= static_cast<std::size_t>(dims[k]);
        }
        std::size_t idx = 0;
        for (int a : axes) idx = idx * static_cast<std::size_t>(dims[static_cast<std::size_t>(a)]) +
                                 static_cast<std::size_t>(c[static_cast<std::size_t>(a)]);
        out.m[idx] += m[flat];
    }
    return out;
}

double entropy(const Table& t) {
    double h = 0;
    for (double v : t.m)
        if (v > 0) h -= v * std::log(v);
    return h / std::log(2.0);
}

double entropy(const Table& t, const std::vector<int>& axes) {
    if (axes.empty()) return 0;
    return entropy(t.marginal(axes));
}

static std::vector<int> unite(std::vector<int> a, const std::vector<int>& b) {
    for (int x : b)
        if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
    return a;
}

double cond_entropy(const Table& t, const std::vector<int>& a, const std::vector<int>& given) {
    return entropy(t, unite(a, given)) - entropy(t, given);
}

double mutual_info(const Table& t, const std::vector<int>& a, const std::vector<int>& b,
                   const std::vector<int>& given) {
    return entropy(t, unite(a, given)) + entropy(t, unite(b, given)) - entropy(t, unite(unite(a, b), given)) -
           entropy(t, given);
}

double divergence(const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0) continue;
        if (q[k] <= 0) return kInfinity;
        d += p[k] * std::log2(p[k] / q[k]);
    }
    return d;
}

Table random_table(const std::vector<int>& dims, std::mt19937_64& rng, double zero_prob) {
    Table t;
    t.dims = dims;
    std::size_t cells = 1;
    for (int d : dims) cells *= static_cast<std::size_t>(d);
    std::exponential_distribution<double> e(1.0);
    std::uniform_real_distribution<double> u(0, 1);
    t.m.resize(cells);
    double s = 0;
    for (double& v : t.m) s += (v = u(rng) < zero_prob ? 0.0 : e(rng));
    if (s == 0) {
        t.m[0] = 1;
        s = 1;
    }
    for (double& v : t.m) v /= s;
    return t;
}

double gallager_er_bsc(double p, double rate) {
    auto f = [&](double rho) {
        double s = 1 / (1 + rho);
        return rho - (1 + rho) * std::log2(std::pow(p, s) + std::pow(1 - p, s)) - rho * rate;
    };
    double lo = 0, hi = 1;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
        double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (f(a) < f(b))
            lo = a;
        else
            hi = b;
    }
    return std::max({f(0.0), f(1.0), f(0.5 * (lo + hi))});
}

namespace {

// V over (x, t, y) from the pair mass a = V(0,0) = V(1,1) and q[x][t] = V(y=1 | x, t)
std::array<double, 8> bsc_point(double a, const std::array<double, 4>& q) {
    std::array<double, 4> pair{a, 0.5 - a, 0.5 - a, a};
    std::array<double, 8> v{};
    for (int c = 0; c < 4; ++c) {
        v[static_cast<std::size_t>(2 * c)] = pair[static_cast<std::size_t>(c)] * (1 - q[static_cast<std::size_t>(c)]);
        v[static_cast<std::size_t>(2 * c + 1)] = pair[static_cast<std::size_t>(c)] * q[static_cast<std::size_t>(c)];
    }
    return v;
}

double plogp(double v) { return v > 0 ? v * std::log2(v) : 0.0; }

// +inf outside the family's set
double bsc_value(const std::array<double, 8>& v, double p, double rate, bool expurgated) {
    const double w[2][2] = {{1 - p, p}, {p, 1 - p}};
    double vxy[2][2] = {}, vty[2][2] = {}, vxt[2][2] = {};
    for (int x = 0; x < 2; ++x)
        for (int t = 0; t < 2; ++t)
            for (int y = 0; y < 2; ++y) {
                double m = v[static_cast<std::size_t>(4 * x + 2 * t + y)];
                vxy[x][y] += m;
                vty[t][y] += m;
                vxt[x][t] += m;
            }
    double a_sent = 0, a_cand = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            a_sent -= vxy[x][y] * std::log2(w[x][y]);
            a_cand -= vty[x][y] * std::log2(w[x][y]);
        }
    if (a_cand > a_sent + 1e-12 * std::max(1.0, a_sent)) return kInfinity;
    double h_xt = 0;
    for (auto& row : vxt)
        for (double m : row) h_xt -= plogp(m);
    double i_pair = 2.0 - h_xt;  // both marginals uniform
    if (expurgated && i_pair > rate + 1e-12) return kInfinity;
    double d = 0, h_xy = 0, h_xty = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            if (vxy[x][y] > 0) d += vxy[x][y] * std::log2(vxy[x][y] / (0.5 * w[x][y]));
            h_xy -= plogp(vxy[x][y]);
        }
    for (double m : v) h_xty -= plogp(m);
    double i_cand = 1.0 + h_xy - h_xty;
    return d + std::max(0.0, i_cand - rate);
}

}  // namespace

double lattice_exponent_bsc(double p, double rate, bool expurgated, int denominator) {
    if (denominator % 2) throw std::invalid_argument("denominator must be even");
    int half = denominator / 2;
    double n = denominator;
    struct Seed {
        double value;
        double a;
        std::array<double, 4> q;
    };
    std::vector<Seed> seeds;
    for (int a = 0; a <= half; ++a) {
        std::array<int, 4> size{a, half - a, half - a, a};
        for (int k0 = 0; k0 <= size[0]; ++k0)
            for (int k1 = 0; k1 <= size[1]; ++k1)
                for (int k2 = 0; k2 <= size[2]; ++k2)
                    for (int k3 = 0; k3 <= size[3]; ++k3) {
                        std::array<int, 4> k{k0, k1, k2, k3};
                        std::array<double, 8> v{};
                        std::array<double, 4> q{};
                        for (std::size_t c = 0; c < 4; ++c) {
                            v[2 * c] = (size[c] - k[c]) / n;
                            v[2 * c + 1] = k[c] / n;
                            q[c] = size[c] ? static_cast<double>(k[c]) / size[c] : 0.5;
                        }
                        double val = bsc_value(v, p, rate, expurgated);
                        if (std::isfinite(val)) seeds.push_back({val, a / n, q});
                    }
    }
    if (seeds.empty()) return kInfinity;
    std::sort(seeds.begin(), seeds.end(), [](const Seed& x, const Seed& y) { return x.value < y.value; });
    double best = seeds.front().value;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss(0, 1);
    std::size_t refine = std::min<std::size_t>(8, seeds.size());
    for (std::size_t s = 0; s < refine; ++s) {
        std::array<double, 5> x{seeds[s].a, seeds[s].q[0], seeds[s].q[1], seeds[s].q[2], seeds[s].q[3]};
        auto eval = [&](const std::array<double, 5>& z) {
            if (z[0] < 0 || z[0] > 0.5) return kInfinity;
            for (int c = 1; c < 5; ++c)
                if (z[static_cast<std::size_t>(c)] < 0 || z[static_cast<std::size_t>(c)] > 1) return kInfinity;
            return bsc_value(bsc_point(z[0], {z[1], z[2], z[3], z[4]}), p, rate, expurgated);
        };
        double fx = eval(x);
        for (double step = 1.0 / denominator; step > 1e-10; step *= 0.5) {
            bool moved = true;
            while (moved) {
                moved = false;
                std::vector<std::array<double, 5>> dirs;
                for (int c = 0; c < 5; ++c)
                    for (double sgn : {-1.0, 1.0}) {
                        std::array<double, 5> d{};
                        d[static_cast<std::size_t>(c)] = sgn;
                        dirs.push_back(d);
                    }
                for (int r = 0; r < 24; ++r) {
                    std::array<double, 5> d{};
                    double norm = 0;
                    for (double& e : d) norm += (e = gauss(rng)) * e;
                    for (double& e : d) e /= std::sqrt(norm);
                    dirs.push_back(d);
                }
                for (const auto& d : dirs) {
                    std::array<double, 5> y = x;
                    for (std::size_t c = 0; c < 5; ++c) y[c] += step * d[c];
                    double fy = eval(y);
                    if (fy < fx - 1e-15) {
                        x = y;
                        fx = fy;
                        moved = true;
                    }
                }
            }
        }
        best = std::min(best, fx);
    }
    return best;
}

std::vector<int> counts(const std::vector<const std::vector<int>*>& seqs, const std::vector<int>& dims) {
    std::size_t cells = 1;
    for (int d : dims) cells *= static_cast<std::size_t>(d);
    std::vector<int> out(cells, 0);
    std::size_t n = seqs.front()->size();
    for (std::size_t pos = 0; pos < n; ++pos) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < seqs.size(); ++k)
            idx = idx * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>((*seqs[k])[pos]);
        ++out[idx];
    }
    return out;
}

namespace {

double alpha_of(const std::vector<int>& c, const std::vector<double>& w, int nx, int ny, int metric, int n) {
    if (metric == 0) {
        double s = 0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!c[k]) continue;
            if (w[k] <= 0) return kInfinity;
            s -= c[k] * std::log2(w[k]);
        }
        return s / n;
    }
    double h = 0;
    for (int x = 0; x < nx; ++x) {
        int row = 0;
        for (int y = 0; y < ny; ++y) row += c[static_cast<std::size_t>(x * ny + y)];
        for (int y = 0; y < ny; ++y) {
            int v = c[static_cast<std::size_t>(x * ny + y)];
            if (v) h += static_cast<double>(v) / n * std::log2(static_cast<double>(row) / v);
        }
    }
    return h;
}

bool leq(double a, double b) {
    if (std::isinf(a)) return std::isinf(b);
    if (std::isinf(b)) return true;
    return a <= b + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// visits every y in ny^n with the per-word alphas and likelihoods
template <class F>
void for_each_output(const std::vector<std::vector<int>>& code, const std::vector<double>& w, int nx, int ny,
                     int metric, F&& visit) {
    int n = static_cast<int>(code.front().size());
    std::vector<int> y(static_cast<std::size_t>(n), 0);
    std::vector<double> alpha(code.size()), like(code.size());
    while (true) {
        for (std::size_t i = 0; i < code.size(); ++i) {
            std::vector<int> c = counts({&code[i], &y}, {nx, ny});
            alpha[i] = alpha_of(c, w, nx, ny, metric, n);
            double l = 1;
            for (int k = 0; k < n; ++k)
                l *= w[static_cast<std::size_t>(code[i][static_cast<std::size_t>(k)] * ny + y[static_cast<std::size_t>(k)])];
            like[i] = l;
        }
        visit(y, alpha, like);
        int pos = n - 1;
        while (pos >= 0 && ++y[static_cast<std::size_t>(pos)] == ny) y[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
}

}  // namespace

double exact_error(const std::vector<std::vector<int>>& code, const std::vector<double>& w, int nx, int ny,
                   int metric) {
    double err = 0;
    for_each_output(code, w, nx, ny, metric,
                    [&](const std::vector<int>&, const std::vector<double>& alpha, const std::vector<double>& like) {
                        for (std::size_t i = 0; i < code.size(); ++i)
                            for (std::size_t j = 0; j < code.size(); ++j)
                                if (j != i && leq(alpha[j], alpha[i])) {
                                    err += like[i];
                                    break;
                                }
                    });
    return err / static_cast<double>(code.size());
}

double union_bound(const std::vector<std::vector<int>>& code, const std::vector<double>& w, int nx, int ny,
                   int metric) {
    double s = 0;
    for_each_output(code, w, nx, ny, metric,
                    [&](const std::vector<int>&, const std::vector<double>& alpha, const std::vector<double>& like) {
                        for (std::size_t i = 0; i < code.size(); ++i)
                            for (std::size_t j = 0; j < code.size(); ++j)
                                if (j != i && leq(alpha[j], alpha[i])) s += like[i];
                    });
    return s / static_cast<double>(code.size());
}

double pair_overlap(const std::vector<std::vector<int>>& code, const std::vector<double>& w, int nx, int ny,
                    int metric) {
    double s = 0;
    for_each_output(code, w, nx, ny, metric,
                    [&](const std::vector<int>& y, const std::vector<double>& alpha, const std::vector<double>& like) {
                        for (std::size_t i = 0; i < code.size(); ++i) {
                            std::map<std::vector<int>, int> groups;
                            for (std::size_t j = 0; j < code.size(); ++j)
                                if (j != i && leq(alpha[j], alpha[i]))
                                    ++groups[counts({&code[i], &code[j], &y}, {nx, nx, ny})];
                            for (const auto& [key, g] : groups) s += like[i] * g * (g - 1);
                        }
                    });
    return s / static_cast<double>(code.size());
}

std::int64_t brute_type_class_size(const std::vector<int>& symbol_counts) {
    int n = std::accumulate(symbol_counts.begin(), symbol_counts.end(), 0);
    int k = static_cast<int>(symbol_counts.size());
    std::vector<int> s(static_cast<std::size_t>(n), 0);
    std::int64_t hits = 0;
    while (true) {
        std::vector<int> c(static_cast<std::size_t>(k), 0);
        for (int v : s) ++c[static_cast<std::size_t>(v)];
        if (c == symbol_counts) ++hits;
        int pos = n - 1;
        while (pos >= 0 && ++s[static_cast<std::size_t>(pos)] == k) s[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return hits;
}

}  // namespace oracle
