#include "relexp/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relexp {

std::vector<int> joint_counts(std::span<const Sequence* const> seqs, const std::vector<int>& dims) {
    if (seqs.size() != dims.size() || seqs.empty()) throw InputError("joint_counts: arity mismatch");
    std::size_t n = seqs[0]->size();
    for (const Sequence* s : seqs)
        if (s->size() != n) throw InputError("joint_counts: sequences differ in length");
    std::vector<int> counts(cell_count(dims), 0);
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < seqs.size(); ++k) {
            int sym = (*seqs[k])[t];
            if (sym >= dims[k]) throw InputError("joint_counts: symbol outside alphabet");
            idx = idx * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(sym);
        }
        ++counts[idx];
    }
    return counts;
}

std::vector<int> joint_counts(std::initializer_list<const Sequence*> seqs, const std::vector<int>& dims) {
    return joint_counts(std::span<const Sequence* const>(seqs.begin(), seqs.size()), dims);
}

Joint type_of(const std::vector<int>& counts, const std::vector<int>& dims) {
    double n = std::accumulate(counts.begin(), counts.end(), 0.0);
    std::vector<double> m(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) m[k] = n > 0 ? counts[k] / n : 0.0;
    return Joint(dims, std::move(m));
}

double log2_multinomial(std::span<const int> counts) {
    int n = 0;
    double s = 0;
    for (int c : counts) {
        if (c < 0) throw InputError("negative count");
        n += c;
        s -= std::lgamma(c + 1.0);
    }
    return (s + std::lgamma(n + 1.0)) / std::log(2.0);
}

namespace {

long double binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    return static_cast<long double>(r);
}

}  // namespace

double multinomial(std::span<const int> counts) {
    int left = 0;
    for (int c : counts) left += c;
    long double r = 1;
    for (int c : counts) {
        r *= binomial(left, c);
        left -= c;
    }
    return static_cast<double>(r);
}

double shell_size(std::span<const int> counts, std::size_t width) {
    double r = 1;
    for (std::size_t row = 0; row * width < counts.size(); ++row) r *= multinomial(counts.subspan(row * width, width));
    return r;
}

double log2_shell_size(std::span<const int> counts, std::size_t width) {
    double r = 0;
    for (std::size_t row = 0; row * width < counts.size(); ++row) r += log2_multinomial(counts.subspan(row * width, width));
    return r;
}

std::vector<int> composition_counts(const Joint& p, int n, double tol) {
    std::vector<int> out(p.size());
    int total = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        double v = p[k] * n;
        double r = std::round(v);
        if (std::abs(v - r) > tol) throw InputError("distribution is not a type with denominator " + std::to_string(n));
        out[k] = static_cast<int>(r);
        total += out[k];
    }
    if (total != n) throw InputError("composition does not sum to n");
    return out;
}

std::vector<int> round_composition(const Joint& p, int n) {
    std::vector<int> out(p.size());
    std::vector<std::pair<double, std::size_t>> rem;
    int total = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        double v = p[k] * n;
        out[k] = static_cast<int>(std::floor(v + 1e-12));
        total += out[k];
        rem.push_back({v - out[k], k});
    }
    std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; total < n && i < rem.size(); ++i, ++total) ++out[rem[i].second];
    return out;
}

namespace {

struct PinState {
    std::vector<int> map;    // cell -> marginal cell
    std::vector<int> left;   // remaining count per marginal cell
    std::vector<int> last;   // last cell index per marginal cell
};

struct Enumerator {
    std::size_t cells;
    std::vector<PinState> pins;
    const std::vector<char>* support;
    const std::function<void(std::span<const int>)>* visit;
    std::vector<int> cur;

    void rec(std::size_t c) {
        if (c == cells) {
            (*visit)(cur);
            return;
        }
        int ub = 1 << 30;
        int forced = -1;
        for (auto& p : pins) {
            int m = p.map[c];
            ub = std::min(ub, p.left[static_cast<std::size_t>(m)]);
            if (p.last[static_cast<std::size_t>(m)] == static_cast<int>(c)) {
                int f = p.left[static_cast<std::size_t>(m)];
                if (forced >= 0 && forced != f) return;
                forced = f;
            }
        }
        if (support && !(*support)[c]) {
            if (forced > 0) return;
            forced = 0;
        }
        int lo = forced >= 0 ? forced : 0;
        int hi = forced >= 0 ? forced : ub;
        if (lo > ub) return;
        for (int v = lo; v <= hi; ++v) {
            cur[c] = v;
            for (auto& p : pins) p.left[static_cast<std::size_t>(p.map[c])] -= v;
            rec(c + 1);
            for (auto& p : pins) p.left[static_cast<std::size_t>(p.map[c])] += v;
        }
        cur[c] = 0;
    }
};

}  // namespace

void for_each_type(const std::vector<int>& dims, int n, const std::vector<MarginalPin>& pins,
                   const std::function<void(std::span<const int>)>& visit, const std::vector<char>* support) {
    Enumerator e;
    e.cells = cell_count(dims);
    e.support = support;
    e.visit = &visit;
    e.cur.assign(e.cells, 0);
    if (support && support->size() != e.cells) throw InputError("support mask size mismatch");
    std::vector<MarginalPin> all = pins;
    all.push_back({{}, {n}});
    for (const auto& pin : all) {
        PinState st;
        st.map = projection_map(dims, pin.axes);
        std::size_t mcells = 1;
        for (int a : pin.axes) mcells *= static_cast<std::size_t>(dims.at(static_cast<std::size_t>(a)));
        if (pin.counts.size() != mcells) throw InputError("pinned marginal has wrong size");
        int sum = std::accumulate(pin.counts.begin(), pin.counts.end(), 0);
        if (sum != n) return;  // inconsistent pins admit no type
        st.left = pin.counts;
        st.last.assign(mcells, -1);
        for (std::size_t c = 0; c < e.cells; ++c) st.last[static_cast<std::size_t>(st.map[c])] = static_cast<int>(c);
        e.pins.push_back(std::move(st));
    }
    e.rec(0);
}

std::vector<std::vector<int>> enumerate_types(const std::vector<int>& dims, int n, const std::vector<MarginalPin>& pins) {
    std::vector<std::vector<int>> out;
    for_each_type(dims, n, pins, [&](std::span<const int> c) { out.emplace_back(c.begin(), c.end()); });
    return out;
}

double count_types(std::size_t cells, int n) {
    return static_cast<double>(binomial(n + static_cast<int>(cells) - 1, static_cast<int>(cells) - 1));
}

Sequence random_sequence(std::span<const int> counts, Rng& rng) {
    Sequence s;
    for (std::size_t a = 0; a < counts.size(); ++a) s.insert(s.end(), static_cast<std::size_t>(counts[a]), static_cast<std::uint8_t>(a));
    std::shuffle(s.begin(), s.end(), rng);
    return s;
}

Sequence random_conditional_sequence(const Sequence& base, std::span<const int> cond_counts, int new_alphabet, Rng& rng) {
    std::size_t width = static_cast<std::size_t>(new_alphabet);
    std::size_t rows = cond_counts.size() / width;
    std::vector<std::vector<std::size_t>> positions(rows);
    for (std::size_t t = 0; t < base.size(); ++t) {
        if (base[t] >= rows) throw InputError("base symbol outside alphabet");
        positions[base[t]].push_back(t);
    }
    Sequence out(base.size(), 0);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = cond_counts.subspan(r * width, width);
        if (std::accumulate(row.begin(), row.end(), 0) != static_cast<int>(positions[r].size()))
            throw InputError("conditional counts do not match the base sequence");
        Sequence fill = random_sequence(row, rng);
        for (std::size_t k = 0; k < fill.size(); ++k) out[positions[r][k]] = fill[k];
    }
    return out;
}

}  // namespace relexp
