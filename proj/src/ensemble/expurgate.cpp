#include "relexp/ensemble/expurgate.hpp"

#include <algorithm>
#include <cmath>

#include "relexp/core/info.hpp"
#include "relexp/mac/functions.hpp"

namespace relexp::ensemble {

namespace {

double pair_information(const std::vector<int>& counts, int nx) {
    return std::max(0.0, mutual_info(type_of(counts, {nx, nx}), {0}, {1}));
}

void record(CapCheck& c, double count, double log2_cap) {
    if (count <= 0) return;
    ++c.checked;
    double margin = std::log2(count) - log2_cap;
    c.worst_margin = std::max(c.worst_margin, margin);
    // a count equal to its cap passes; the window absorbs rounding in log2
    if (margin > 1e-9) c.pass = false;
}

}  // namespace

std::vector<double> p2p_scores(const P2PCode& c, double rate, double delta) {
    std::vector<double> s(static_cast<std::size_t>(c.size()), 0.0);
    for (int i = 0; i < c.size(); ++i)
        for (const auto& [v, count] : neighbour_tally(c, i))
            s[static_cast<std::size_t>(i)] +=
                static_cast<double>(count) * std::exp2(-c.n * (rate - pair_information(v, c.nx) + 3 * delta));
    return s;
}

CapCheck check_p2p_per_codeword(const P2PCode& c, double rate, double delta, double multiple) {
    CapCheck r;
    for (int i = 0; i < c.size(); ++i)
        for (const auto& [v, count] : neighbour_tally(c, i))
            record(r, static_cast<double>(count), c.n * (rate - pair_information(v, c.nx) + multiple * delta));
    return r;
}

CapCheck check_p2p_average(const P2PCode& c, double rate, double delta, double multiple) {
    CapCheck r;
    for (const auto& [v, count] : pair_tally(c))
        record(r, static_cast<double>(count) / c.size(), c.n * (rate - pair_information(v, c.nx) + multiple * delta));
    return r;
}

P2PExpurgation expurgate_p2p(const P2PCode& c, double rate, double delta) {
    P2PExpurgation r;
    r.scores = p2p_scores(c, rate, delta);
    r.code = c;
    r.code.words.clear();
    double total = 0;
    for (int i = 0; i < c.size(); ++i) {
        total += r.scores[static_cast<std::size_t>(i)];
        if (r.scores[static_cast<std::size_t>(i)] < 1) {
            r.kept.push_back(i);
            r.code.words.push_back(c.words[static_cast<std::size_t>(i)]);
        }
    }
    r.mean_score = total / c.size();
    r.half_kept = 2 * static_cast<int>(r.kept.size()) >= c.size();
    r.per_codeword = check_p2p_per_codeword(r.code, rate, delta);
    if (!r.code.words.empty()) r.average = check_p2p_average(r.code, rate, delta);
    return r;
}

double f_value(Which w, const std::vector<int>& counts, const std::vector<int>& dims, double rx, double ry) {
    Joint v = type_of(counts, dims);
    mac::Roles roles = mac::roles_uxy();
    switch (w) {
        case Which::U: return mac::f_u(v, roles);
        case Which::X: roles.xt = 3; return mac::f_x(v, roles, rx);
        case Which::Y: roles.yt = 3; return mac::f_y(v, roles, ry);
        case Which::XY: roles.xt = 3; roles.yt = 4; return mac::f_xy(v, roles, rx, ry);
    }
    return 0;
}

namespace {

// F values memoized per (which, type).
class FCache {
public:
    FCache(const MacCode& c, double rx, double ry) : code_(c), rx_(rx), ry_(ry) {}
    double operator()(Which w, const std::vector<int>& counts) {
        auto& memo = memo_[static_cast<int>(w)];
        auto it = memo.find(counts);
        if (it != memo.end()) return it->second;
        double f = f_value(w, counts, first_order_dims(code_, w), rx_, ry_);
        memo.emplace(counts, f);
        return f;
    }

private:
    const MacCode& code_;
    double rx_, ry_;
    std::map<std::vector<int>, double> memo_[4];
};

// sum over w and V of L_w(i,j,V) 2^{n[F_w(V) - 6 delta]}
double pair_score(const MacCode& c, int i, int j, double delta, FCache& f) {
    double s = 0;
    for (Which w : kFirstOrder)
        for (const auto& [v, count] : pair_counts(c, w, i, j))
            s += static_cast<double>(count) * std::exp2(c.n * (f(w, v) - 6 * delta));
    return s;
}

std::vector<int> indices(int m) {
    std::vector<int> v(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) v[static_cast<std::size_t>(k)] = k;
    return v;
}

}  // namespace

MacExpurgation expurgate_mac(const MacCode& c, double rx, double ry, double delta) {
    MacExpurgation r;
    FCache f(c, rx, ry);
    int mx = c.mx(), my = c.my();
    std::vector<std::vector<double>> t(static_cast<std::size_t>(mx), std::vector<double>(static_cast<std::size_t>(my)));
    double total = 0;
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j) {
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = pair_score(c, i, j, delta, f);
            total += t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    r.mean_score = total / (static_cast<double>(mx) * my);
    r.g.assign(static_cast<std::size_t>(mx), 0.0);
    r.h.assign(static_cast<std::size_t>(my), 0.0);
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j) {
            r.g[static_cast<std::size_t>(i)] += t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / my;
            r.h[static_cast<std::size_t>(j)] += t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / mx;
        }
    r.code = c;
    r.code.cx.clear();
    r.code.cy.clear();
    for (int i = 0; i < mx; ++i)
        if (r.g[static_cast<std::size_t>(i)] < 1) {
            r.kept_x.push_back(i);
            r.code.cx.push_back(c.cx[static_cast<std::size_t>(i)]);
        }
    for (int j = 0; j < my; ++j)
        if (r.h[static_cast<std::size_t>(j)] < 1) {
            r.kept_y.push_back(j);
            r.code.cy.push_back(c.cy[static_cast<std::size_t>(j)]);
        }
    r.half_kept_x = 2 * static_cast<int>(r.kept_x.size()) >= mx;
    r.half_kept_y = 2 * static_cast<int>(r.kept_y.size()) >= my;
    if (r.kept_x.empty() || r.kept_y.empty()) {
        r.per_pair.pass = r.average.pass = false;
        return r;
    }
    r.average_factor = std::min(static_cast<double>(mx) / static_cast<double>(r.kept_x.size()),
                                static_cast<double>(my) / static_cast<double>(r.kept_y.size()));
    r.per_pair = check_mac_per_pair(r.code, rx, ry, delta);
    r.average = check_mac_average(r.code, rx, ry, delta, r.average_factor);
    return r;
}

CapCheck check_mac_per_pair(const MacCode& c, double rx, double ry, double delta) {
    CapCheck r;
    FCache f(c, rx, ry);
    std::vector<int> xs = indices(c.mx()), ys = indices(c.my());
    double rmin = std::min(rx, ry);
    for (int i = 0; i < c.mx(); ++i)
        for (int j = 0; j < c.my(); ++j)
            for (Which w : kFirstOrder)
                for (const auto& [v, count] : pair_counts(c, w, i, j, xs, ys))
                    record(r, static_cast<double>(count), -c.n * (f(w, v) - rmin - 6 * delta));
    return r;
}

CapCheck check_mac_average(const MacCode& c, double rx, double ry, double delta, double factor) {
    CapCheck r;
    FCache f(c, rx, ry);
    double pairs = static_cast<double>(c.mx()) * c.my();
    for (Which w : kFirstOrder)
        for (const auto& [v, count] : first_order_tally(c, w))
            record(r, static_cast<double>(count) / pairs, std::log2(factor) - c.n * (f(w, v) - 6 * delta));
    return r;
}

}  // namespace relexp::ensemble
