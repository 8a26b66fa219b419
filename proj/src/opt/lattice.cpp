#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Dense>

#include "relexp/opt/slice.hpp"

namespace relexp::opt {

namespace {

struct Proj {
    std::vector<std::vector<int>> maps;  // per pin: cell -> marginal cell
};

Proj projections(const Slice& s) {
    Proj p;
    for (const auto& pin : s.pins) p.maps.push_back(projection_map(s.dims, pin.axes));
    return p;
}

std::string structure_key(const Slice& s) {
    std::string k;
    for (int d : s.dims) k += std::to_string(d) + ",";
    k += "|";
    for (const auto& pin : s.pins) {
        for (int a : pin.axes) k += std::to_string(a) + ",";
        k += ";";
    }
    k += "|";
    for (char c : s.support) k += c ? '1' : '0';
    return k;
}

MoveSet build_moves_uncached(const Slice& s) {
    const std::size_t n = s.cells();
    std::vector<int> col(n, -1);
    std::vector<int> allowed;
    for (std::size_t c = 0; c < n; ++c)
        if (s.allowed(c)) {
            col[c] = static_cast<int>(allowed.size());
            allowed.push_back(static_cast<int>(c));
        }
    const int m = static_cast<int>(allowed.size());
    Proj pr = projections(s);

    // constraint rows over allowed cells
    std::vector<Eigen::VectorXd> rows;
    rows.push_back(Eigen::VectorXd::Ones(m));
    for (std::size_t k = 0; k < s.pins.size(); ++k) {
        std::size_t mc = s.pins[k].target.size();
        for (std::size_t g = 0; g < mc; ++g) {
            Eigen::VectorXd r = Eigen::VectorXd::Zero(m);
            for (int a = 0; a < m; ++a)
                if (static_cast<std::size_t>(pr.maps[k][static_cast<std::size_t>(allowed[static_cast<std::size_t>(a)])]) == g) r[a] = 1;
            rows.push_back(r);
        }
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), m);
    for (std::size_t r = 0; r < rows.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    MoveSet out;
    out.dimension = m - static_cast<int>(lu.rank());
    if (out.dimension <= 0) return out;

    auto same_all = [&](int a, int b) {
        for (const auto& mp : pr.maps)
            if (mp[static_cast<std::size_t>(a)] != mp[static_cast<std::size_t>(b)]) return false;
        return true;
    };

    std::vector<Move> candidates;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (same_all(allowed[static_cast<std::size_t>(i)], allowed[static_cast<std::size_t>(j)])) {
                Move mv;
                mv.len = 2;
                mv.cell = {allowed[static_cast<std::size_t>(i)], allowed[static_cast<std::size_t>(j)], 0, 0};
                mv.coef = {1, -1, 0, 0};
                candidates.push_back(mv);
            }
    const std::size_t n_two = candidates.size();

    const int rank = static_cast<int>(s.dims.size());
    std::vector<int> ca(static_cast<std::size_t>(rank)), cb(static_cast<std::size_t>(rank));
    Joint shape = Joint::zeros(s.dims);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            int a = allowed[static_cast<std::size_t>(i)], b = allowed[static_cast<std::size_t>(j)];
            shape.coords(static_cast<std::size_t>(a), ca);
            shape.coords(static_cast<std::size_t>(b), cb);
            for (int t = 0; t < rank; ++t) {
                if (ca[static_cast<std::size_t>(t)] == cb[static_cast<std::size_t>(t)]) continue;
                std::vector<int> cc = ca, cd = cb;
                std::swap(cc[static_cast<std::size_t>(t)], cd[static_cast<std::size_t>(t)]);
                int c = static_cast<int>(shape.index(cc)), d = static_cast<int>(shape.index(cd));
                if (c == b || !s.allowed(static_cast<std::size_t>(c)) || !s.allowed(static_cast<std::size_t>(d))) continue;
                bool ok = true;
                for (const auto& mp : pr.maps) {
                    int pa = mp[static_cast<std::size_t>(a)], pb = mp[static_cast<std::size_t>(b)];
                    int pc = mp[static_cast<std::size_t>(c)], pd = mp[static_cast<std::size_t>(d)];
                    if (!((pa == pc && pb == pd) || (pa == pd && pb == pc))) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                Move mv;
                mv.len = 4;
                mv.cell = {a, b, c, d};
                mv.coef = {1, 1, -1, -1};
                candidates.push_back(mv);
            }
        }
    }

    // greedy independent subset by Gram-Schmidt
    std::vector<Eigen::VectorXd> basis;
    std::vector<char> used(candidates.size(), 0);
    for (std::size_t k = 0; k < candidates.size() && static_cast<int>(basis.size()) < out.dimension; ++k) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
        for (int t = 0; t < candidates[k].len; ++t)
            v[col[static_cast<std::size_t>(candidates[k].cell[static_cast<std::size_t>(t)])]] += candidates[k].coef[static_cast<std::size_t>(t)];
        double norm0 = v.norm();
        if (norm0 == 0) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) v -= q.dot(v) * q;
        double nv = v.norm();
        if (nv > 1e-8 * norm0) {
            basis.push_back(v / nv);
            used[k] = 1;
        }
    }
    for (std::size_t k = 0; k < candidates.size(); ++k)
        if (used[k] || k < n_two) out.sparse.push_back(candidates[k]);
    // a few extra swaps help near faces of the polytope
    std::size_t extra = 0;
    for (std::size_t k = n_two; k < candidates.size() && extra < static_cast<std::size_t>(out.dimension); k += 3)
        if (!used[k]) {
            out.sparse.push_back(candidates[k]);
            ++extra;
        }

    if (static_cast<int>(basis.size()) < out.dimension) {
        Eigen::MatrixXd ker = lu.kernel();
        for (Eigen::Index c = 0; c < ker.cols() && static_cast<int>(basis.size()) < out.dimension; ++c) {
            Eigen::VectorXd v = ker.col(c);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis) v -= q.dot(v) * q;
            double nv = v.norm();
            if (nv > 1e-8) {
                v /= nv;
                basis.push_back(v);
                std::vector<double> full(n, 0.0);
                for (int a = 0; a < m; ++a) full[static_cast<std::size_t>(allowed[static_cast<std::size_t>(a)])] = v[a];
                out.dense.push_back(std::move(full));
            }
        }
    }
    return out;
}

}  // namespace

MoveSet build_moves(const Slice& s) {
    static std::mutex mu;
    static std::map<std::string, MoveSet> cache;
    std::string key = structure_key(s);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    MoveSet ms = build_moves_uncached(s);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, ms);
    return ms;
}

double slice_residual(std::span<const double> x, const Slice& s) {
    double r = 0;
    double total = 0;
    for (double v : x) total += v;
    r = std::abs(total - 1.0);
    for (const auto& pin : s.pins) {
        std::vector<int> mp = projection_map(s.dims, pin.axes);
        std::vector<double> marg(pin.target.size(), 0.0);
        for (std::size_t c = 0; c < x.size(); ++c) marg[static_cast<std::size_t>(mp[c])] += x[c];
        for (std::size_t g = 0; g < marg.size(); ++g) r = std::max(r, std::abs(marg[g] - pin.target[g]));
    }
    return r;
}

bool ipf_project(std::vector<double>& x, const Slice& s, int max_sweeps, double tol) {
    std::vector<std::vector<int>> maps;
    for (const auto& pin : s.pins) maps.push_back(projection_map(s.dims, pin.axes));
    double total = 0;
    for (double v : x) total += v;
    if (!(total > 0)) return false;
    for (double& v : x) v /= total;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (std::size_t k = 0; k < s.pins.size(); ++k) {
            const auto& t = s.pins[k].target;
            std::vector<double> marg(t.size(), 0.0);
            for (std::size_t c = 0; c < x.size(); ++c) marg[static_cast<std::size_t>(maps[k][c])] += x[c];
            for (std::size_t c = 0; c < x.size(); ++c) {
                double mg = marg[static_cast<std::size_t>(maps[k][c])];
                if (mg > 0) x[c] *= t[static_cast<std::size_t>(maps[k][c])] / mg;
            }
            for (std::size_t g = 0; g < t.size(); ++g)
                if (!(marg[g] > 0) && t[g] > 0) return false;
        }
        if (slice_residual(x, s) <= tol) return true;
    }
    return slice_residual(x, s) <= 1e-10;
}

std::vector<double> random_start(const Slice& s, Rng& rng) {
    static const double shapes[] = {0.3, 1.0, 3.0};
    std::uniform_int_distribution<int> pick(0, 2);
    std::gamma_distribution<double> g(shapes[pick(rng)], 1.0);
    std::vector<double> x(s.cells(), 0.0);
    for (std::size_t c = 0; c < x.size(); ++c)
        if (s.allowed(c)) x[c] = g(rng) + 1e-6;
    ipf_project(x, s);
    return x;
}

std::vector<double> interior_point(const Slice& s) {
    std::vector<double> x(s.cells(), 0.0);
    for (std::size_t c = 0; c < x.size(); ++c)
        if (s.allowed(c)) x[c] = 1.0;
    ipf_project(x, s);
    return x;
}

bool for_each_lattice_point(const Slice& s, int n, const std::function<void(std::span<const double>)>& visit) {
    std::vector<MarginalPin> pins;
    for (const auto& pin : s.pins) {
        MarginalPin mp{pin.axes, {}};
        for (double t : pin.target) {
            double v = t * n;
            double r = std::round(v);
            if (std::abs(v - r) > 1e-9) return false;
            mp.counts.push_back(static_cast<int>(r));
        }
        pins.push_back(std::move(mp));
    }
    std::vector<double> x(s.cells());
    const std::vector<char>* sup = s.support.empty() ? nullptr : &s.support;
    for_each_type(
        s.dims, n, pins,
        [&](std::span<const int> counts) {
            for (std::size_t c = 0; c < counts.size(); ++c) x[c] = counts[c] / static_cast<double>(n);
            visit(x);
        },
        sup);
    return true;
}

}  // namespace relexp::opt
