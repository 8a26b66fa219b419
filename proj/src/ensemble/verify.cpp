#include "relexp/ensemble/verify.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "relexp/core/info.hpp"
#include "relexp/core/parallel.hpp"
#include "relexp/mac/functions.hpp"
#include "relexp/ensemble/expurgate.hpp"

namespace relexp::ensemble {

namespace {

void add_row(BandReport& r, std::string quantity, const std::vector<int>& type, double value, double log2_bound,
             bool upper) {
    BandRow row;
    row.quantity = std::move(quantity);
    row.type = type;
    row.value = value;
    row.bound = std::exp2(log2_bound);
    row.upper = upper;
    double lv = value > 0 ? std::log2(value) : -kInf;
    row.margin = upper ? log2_bound - lv : lv - log2_bound;
    row.pass = row.margin >= -1e-9;
    if (!row.pass) ++r.violations;
    r.rows.push_back(std::move(row));
}

void merge(TypeTally& into, const TypeTally& from) {
    for (const auto& [k, v] : from) into[k] += v;
}

std::int64_t lookup(const TypeTally& t, const std::vector<int>& key) {
    auto it = t.find(key);
    return it == t.end() ? 0 : it->second;
}

double pair_info(const std::vector<int>& v, int nx) { return std::max(0.0, mutual_info(type_of(v, {nx, nx}), {0}, {1})); }

// I(X;X~) + I(X^;XX~) of a triple type
double triple_info(const std::vector<int>& v, int nx) {
    Joint j = type_of(v, {nx, nx, nx});
    return std::max(0.0, mutual_info(j, {0}, {1})) + std::max(0.0, mutual_info(j, {2}, {0, 1}));
}

std::vector<std::vector<int>> pair_types(const std::vector<int>& composition) {
    int nx = static_cast<int>(composition.size());
    int n = std::accumulate(composition.begin(), composition.end(), 0);
    return enumerate_types({nx, nx}, n, {{{0}, composition}, {{1}, composition}});
}

}  // namespace

BandReport packing_p2p_bands(const P2PEnsemble& e) {
    int nx = static_cast<int>(e.composition.size());
    int n = std::accumulate(e.composition.begin(), e.composition.end(), 0);
    std::vector<TypeTally> pairs(static_cast<std::size_t>(e.samples)), triples(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
        Rng rng = split_rng(e.seed, k);
        P2PCode c = sample_p2p_code(e.composition, e.m, rng);
        pairs[k] = pair_tally(c);
        triples[k] = triple_tally(c);
    });
    TypeTally pair_total, triple_total;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        merge(pair_total, pairs[k]);
        merge(triple_total, triples[k]);
    }
    BandReport r;
    r.samples = e.samples;
    double norm = static_cast<double>(e.m) * e.samples;
    for (const auto& v : pair_types(e.composition)) {
        double mean = static_cast<double>(lookup(pair_total, v)) / norm;
        double centre = n * (e.rate - pair_info(v, nx));
        add_row(r, "pi", v, mean, centre - n * e.delta, false);
        add_row(r, "pi", v, mean, centre + n * e.delta, true);
    }
    for (const auto& [v, count] : triple_total)
        add_row(r, "lambda", v, static_cast<double>(count) / norm, n * (2 * e.rate - triple_info(v, nx) + 4 * e.delta),
                true);
    return r;
}

TypicalityReport typicality_p2p(const P2PEnsemble& e) {
    int nx = static_cast<int>(e.composition.size());
    int n = std::accumulate(e.composition.begin(), e.composition.end(), 0);
    std::vector<std::vector<int>> types = pair_types(e.composition);
    std::vector<char> typical(static_cast<std::size_t>(e.samples), 0);
    parallel_for(typical.size(), [&](std::size_t k) {
        Rng rng = split_rng(e.seed, k);
        P2PCode c = sample_p2p_code(e.composition, e.m, rng);
        TypeTally pairs = pair_tally(c);
        bool ok = true;
        for (const auto& v : types) {
            double pi = static_cast<double>(lookup(pairs, v)) / e.m;
            double centre = n * (e.rate - pair_info(v, nx));
            double lp = pi > 0 ? std::log2(pi) : -kInf;
            if (lp < centre - 2 * n * e.delta - 1e-9 || lp > centre + 2 * n * e.delta + 1e-9) {
                ok = false;
                break;
            }
        }
        if (ok)
            for (const auto& [v, count] : triple_tally(c))
                if (std::log2(static_cast<double>(count) / e.m) >
                    n * (2 * e.rate - triple_info(v, nx) + 4 * e.delta) + 1e-9) {
                    ok = false;
                    break;
                }
        typical[k] = ok;
    });
    TypicalityReport r;
    r.samples = e.samples;
    for (char t : typical) r.typical += t;
    return r;
}

namespace {

const char* n_name(Which w) {
    switch (w) {
        case Which::U: return "N_U";
        case Which::X: return "N_X";
        case Which::Y: return "N_Y";
        case Which::XY: return "N_XY";
    }
    return "?";
}

const char* lambda_name(Which w) {
    switch (w) {
        case Which::X: return "Lambda_X";
        case Which::Y: return "Lambda_Y";
        default: return "Lambda_XY";
    }
}

// (lower, upper) multiples of delta in the first-order bands
std::pair<double, double> band_multiples(Which w) {
    switch (w) {
        case Which::U: return {1, 2};
        case Which::X:
        case Which::Y: return {3, 4};
        case Which::XY: return {4, 4};
    }
    return {0, 0};
}

double es_value(Which w, const std::vector<int>& counts, const std::vector<int>& dims, double rx, double ry) {
    Joint v = type_of(counts, dims);
    mac::Roles r = mac::roles_uxy();
    switch (w) {
        case Which::X: r.xt = 3; r.xh = 4; return mac::es_x(v, r, rx);
        case Which::Y: r.yt = 3; r.yh = 4; return mac::es_y(v, r, ry);
        default: r.xt = 3; r.yt = 4; r.xh = 5; r.yh = 6; return mac::es_xy(v, r, rx, ry);
    }
}

std::vector<MarginalPin> admissible_pins(const MacEnsemble& e, Which w) {
    std::vector<MarginalPin> pins{{{0, 1}, e.counts_ux}, {{0, 2}, e.counts_uy}};
    if (w == Which::X) pins.push_back({{0, 3}, e.counts_ux});
    if (w == Which::Y) pins.push_back({{0, 3}, e.counts_uy});
    if (w == Which::XY) {
        pins.push_back({{0, 3}, e.counts_ux});
        pins.push_back({{0, 4}, e.counts_uy});
    }
    return pins;
}

}  // namespace

BandReport packing_mac_bands(const MacEnsemble& e) {
    const Which second[] = {Which::X, Which::Y, Which::XY};
    std::size_t samples = static_cast<std::size_t>(e.samples);
    std::vector<std::array<TypeTally, 4>> first(samples);
    std::vector<std::array<TypeTally, 3>> sec(samples);
    MacCode shape;
    parallel_for(samples, [&](std::size_t k) {
        Rng rng = split_rng(e.seed, k);
        MacCode c = sample_mac_code(e.nu, e.nx, e.ny, e.counts_ux, e.counts_uy, e.mx, e.my, rng);
        for (int w = 0; w < 4; ++w) first[k][static_cast<std::size_t>(w)] = first_order_tally(c, kFirstOrder[w]);
        for (int w = 0; w < 3; ++w) sec[k][static_cast<std::size_t>(w)] = second_order_tally(c, second[w]);
    });
    shape.nu = e.nu;
    shape.nx = e.nx;
    shape.ny = e.ny;
    int n = std::accumulate(e.counts_ux.begin(), e.counts_ux.end(), 0);
    double norm = static_cast<double>(e.mx) * e.my * e.samples;
    BandReport r;
    r.samples = e.samples;
    for (int wi = 0; wi < 4; ++wi) {
        Which w = kFirstOrder[wi];
        TypeTally total;
        for (const auto& s : first) merge(total, s[static_cast<std::size_t>(wi)]);
        std::vector<int> dims = first_order_dims(shape, w);
        auto [lo, hi] = band_multiples(w);
        double visited = 0;
        for_each_type(dims, n, admissible_pins(e, w), [&](std::span<const int> t) {
            if (++visited > e.max_types) throw CapabilityError("too many joint types for the packing-band scan");
            std::vector<int> v(t.begin(), t.end());
            double f = f_value(w, v, dims, e.rx, e.ry);
            double mean = static_cast<double>(lookup(total, v)) / norm;
            add_row(r, n_name(w), v, mean, -n * (f + lo * e.delta), false);
            add_row(r, n_name(w), v, mean, -n * (f - hi * e.delta), true);
        });
    }
    for (int wi = 0; wi < 3; ++wi) {
        Which w = second[wi];
        TypeTally total;
        for (const auto& s : sec) merge(total, s[static_cast<std::size_t>(wi)]);
        std::vector<int> dims = second_order_dims(shape, w);
        double slack = (w == Which::XY ? 6 : 4) * e.delta;
        for (const auto& [v, count] : total)
            add_row(r, lambda_name(w), v, static_cast<double>(count) / norm,
                    -n * (es_value(w, v, dims, e.rx, e.ry) - slack), true);
    }
    return r;
}

}  // namespace relexp::ensemble
