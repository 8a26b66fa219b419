#include "relexp/ensemble/packing.hpp"

#include <numeric>

namespace relexp::ensemble {

TypeTally pair_tally(const P2PCode& c) {
    TypeTally t;
    std::vector<int> dims{c.nx, c.nx};
    for (int i = 0; i < c.size(); ++i)
        for (int j = 0; j < c.size(); ++j)
            if (j != i) ++t[joint_counts({&c.words[i], &c.words[j]}, dims)];
    return t;
}

TypeTally triple_tally(const P2PCode& c) {
    TypeTally t;
    std::vector<int> dims{c.nx, c.nx, c.nx};
    for (int i = 0; i < c.size(); ++i)
        for (int j = 0; j < c.size(); ++j) {
            if (j == i) continue;
            for (int k = 0; k < c.size(); ++k)
                if (k != i && k != j) ++t[joint_counts({&c.words[i], &c.words[j], &c.words[k]}, dims)];
        }
    return t;
}

TypeTally neighbour_tally(const P2PCode& c, int i) {
    TypeTally t;
    std::vector<int> dims{c.nx, c.nx};
    for (int j = 0; j < c.size(); ++j)
        if (j != i) ++t[joint_counts({&c.words[i], &c.words[j]}, dims)];
    return t;
}

namespace {

std::int64_t lookup(const TypeTally& t, const std::vector<int>& key) {
    auto it = t.find(key);
    return it == t.end() ? 0 : it->second;
}

void check_total(const std::vector<int>& v, int n) {
    if (std::accumulate(v.begin(), v.end(), 0) != n) throw InputError("joint type has the wrong denominator");
}

}  // namespace

Rational packing_pi(const P2PCode& c, const std::vector<int>& v) {
    if (v.size() != static_cast<std::size_t>(c.nx * c.nx)) throw InputError("pair type has the wrong shape");
    check_total(v, c.n);
    return {lookup(pair_tally(c), v), c.size()};
}

Rational packing_lambda(const P2PCode& c, const std::vector<int>& v) {
    if (v.size() != static_cast<std::size_t>(c.nx * c.nx * c.nx)) throw InputError("triple type has the wrong shape");
    check_total(v, c.n);
    return {lookup(triple_tally(c), v), c.size()};
}

std::vector<int> first_order_dims(const MacCode& c, Which w) {
    switch (w) {
        case Which::U: return {c.nu, c.nx, c.ny};
        case Which::X: return {c.nu, c.nx, c.ny, c.nx};
        case Which::Y: return {c.nu, c.nx, c.ny, c.ny};
        case Which::XY: return {c.nu, c.nx, c.ny, c.nx, c.ny};
    }
    return {};
}

std::vector<int> second_order_dims(const MacCode& c, Which w) {
    switch (w) {
        case Which::X: return {c.nu, c.nx, c.ny, c.nx, c.nx};
        case Which::Y: return {c.nu, c.nx, c.ny, c.ny, c.ny};
        case Which::XY: return {c.nu, c.nx, c.ny, c.nx, c.ny, c.nx, c.ny};
        case Which::U: break;
    }
    throw InputError("second-order packing needs X, Y or XY");
}

namespace {

std::vector<int> all_indices(int m) {
    std::vector<int> v(static_cast<std::size_t>(m));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Adds the first-order tuples of message pair (i, j) with competitors drawn from xs, ys.
void add_pair(const MacCode& c, Which w, int i, int j, const std::vector<int>& xs, const std::vector<int>& ys,
              const std::vector<int>& dims, TypeTally& t) {
    const Sequence* u = &c.u;
    const Sequence* x = &c.cx[static_cast<std::size_t>(i)];
    const Sequence* y = &c.cy[static_cast<std::size_t>(j)];
    switch (w) {
        case Which::U: ++t[joint_counts({u, x, y}, dims)]; break;
        case Which::X:
            for (int k : xs)
                if (k != i) ++t[joint_counts({u, x, y, &c.cx[static_cast<std::size_t>(k)]}, dims)];
            break;
        case Which::Y:
            for (int l : ys)
                if (l != j) ++t[joint_counts({u, x, y, &c.cy[static_cast<std::size_t>(l)]}, dims)];
            break;
        case Which::XY:
            for (int k : xs) {
                if (k == i) continue;
                for (int l : ys)
                    if (l != j)
                        ++t[joint_counts({u, x, y, &c.cx[static_cast<std::size_t>(k)], &c.cy[static_cast<std::size_t>(l)]}, dims)];
            }
            break;
    }
}

}  // namespace

TypeTally first_order_tally(const MacCode& c, Which w) {
    TypeTally t;
    std::vector<int> dims = first_order_dims(c, w);
    std::vector<int> xs = all_indices(c.mx()), ys = all_indices(c.my());
    for (int i = 0; i < c.mx(); ++i)
        for (int j = 0; j < c.my(); ++j) add_pair(c, w, i, j, xs, ys, dims, t);
    return t;
}

TypeTally pair_counts(const MacCode& c, Which w, int i, int j) {
    return pair_counts(c, w, i, j, all_indices(c.mx()), all_indices(c.my()));
}

TypeTally pair_counts(const MacCode& c, Which w, int i, int j, const std::vector<int>& xs, const std::vector<int>& ys) {
    TypeTally t;
    add_pair(c, w, i, j, xs, ys, first_order_dims(c, w), t);
    return t;
}

TypeTally second_order_tally(const MacCode& c, Which w) {
    std::vector<int> dims = second_order_dims(c, w);
    TypeTally t;
    const Sequence* u = &c.u;
    auto xw = [&](int k) { return &c.cx[static_cast<std::size_t>(k)]; };
    auto yw = [&](int l) { return &c.cy[static_cast<std::size_t>(l)]; };
    int mx = c.mx(), my = c.my();
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j) {
            if (w == Which::X) {
                for (int k = 0; k < mx; ++k)
                    for (int k2 = 0; k2 < mx; ++k2)
                        if (k != i && k2 != i && k2 != k) ++t[joint_counts({u, xw(i), yw(j), xw(k), xw(k2)}, dims)];
            } else if (w == Which::Y) {
                for (int l = 0; l < my; ++l)
                    for (int l2 = 0; l2 < my; ++l2)
                        if (l != j && l2 != j && l2 != l) ++t[joint_counts({u, xw(i), yw(j), yw(l), yw(l2)}, dims)];
            } else {
                for (int k = 0; k < mx; ++k) {
                    if (k == i) continue;
                    for (int l = 0; l < my; ++l) {
                        if (l == j) continue;
                        for (int k2 = 0; k2 < mx; ++k2) {
                            if (k2 == i || k2 == k) continue;
                            for (int l2 = 0; l2 < my; ++l2)
                                if (l2 != j && l2 != l)
                                    ++t[joint_counts({u, xw(i), yw(j), xw(k), yw(l), xw(k2), yw(l2)}, dims)];
                        }
                    }
                }
            }
        }
    return t;
}

Rational packing_n(const MacCode& c, const std::vector<int>& v, Which w) {
    if (v.size() != cell_count(first_order_dims(c, w))) throw InputError("joint type has the wrong shape");
    check_total(v, c.n);
    return {lookup(first_order_tally(c, w), v), static_cast<std::int64_t>(c.mx()) * c.my()};
}

Rational packing_lambda(const MacCode& c, const std::vector<int>& v, Which w) {
    if (v.size() != cell_count(second_order_dims(c, w))) throw InputError("joint type has the wrong shape");
    check_total(v, c.n);
    return {lookup(second_order_tally(c, w), v), static_cast<std::int64_t>(c.mx()) * c.my()};
}

}  // namespace relexp::ensemble
