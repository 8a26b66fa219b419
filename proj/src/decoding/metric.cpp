#include "relexp/decoding/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relexp/core/info.hpp"

namespace relexp {

Metric parse_metric(const std::string& s) {
    if (s == "ml") return Metric::ml;
    if (s == "me" || s == "min-entropy") return Metric::min_entropy;
    if (s == "eq" || s == "min-equivocation") return Metric::min_equivocation;
    throw InputError("unknown metric: " + s);
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::ml: return "ml";
        case Metric::min_entropy: return "me";
        case Metric::min_equivocation: return "eq";
    }
    return "?";
}

bool alpha_leq(double a, double b) {
    if (a == kInf) return b == kInf;
    if (b == kInf) return true;
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return a <= b + kTieWindow * scale;
}

double alpha_p2p(Metric m, const Joint& v_xy, const Joint& w) {
    if (v_xy.dims() != w.dims()) throw InputError("alpha: shape mismatch");
    switch (m) {
        case Metric::ml: {
            double s = 0;
            for (std::size_t c = 0; c < v_xy.size(); ++c) {
                if (!(v_xy[c] > 0)) continue;
                if (!(w[c] > 0)) return kInf;
                s -= v_xy[c] * std::log2(w[c]);
            }
            return s;
        }
        case Metric::min_entropy: return cond_entropy(v_xy, {1}, {0});
        case Metric::min_equivocation: break;
    }
    throw InputError("alpha: metric not defined for a single-user channel");
}

double alpha_mac(const Joint& v_uxyz) { return cond_entropy(v_uxyz, {1, 2}, {0, 3}); }

namespace {

std::string key_of(const std::vector<int>& counts) {
    return std::string(reinterpret_cast<const char*>(counts.data()), counts.size() * sizeof(int));
}

double nlogn(int k) { return k > 0 ? k * std::log2(static_cast<double>(k)) : 0.0; }

}  // namespace

P2PMetricTable::P2PMetricTable(Metric m, const Joint& w) : metric_(m), w_(w) {
    if (w.rank() != 2) throw InputError("point-to-point channel must have two axes");
    if (m == Metric::min_equivocation) throw InputError("min-equivocation needs a two-user channel");
    logw_.resize(w.size());
    for (std::size_t c = 0; c < w.size(); ++c) logw_[c] = w[c] > 0 ? std::log2(w[c]) : -kInf;
}

double P2PMetricTable::operator()(const std::vector<int>& counts) {
    std::string key = key_of(counts);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int n = std::accumulate(counts.begin(), counts.end(), 0);
    double v = 0;
    if (metric_ == Metric::ml) {
        for (std::size_t c = 0; c < counts.size(); ++c) {
            if (counts[c] == 0) continue;
            if (logw_[c] == -kInf) {
                v = kInf;
                break;
            }
            v -= counts[c] * logw_[c];
        }
        if (v != kInf) v /= n;
    } else {
        int ny = w_.dim(1);
        std::size_t nx = counts.size() / static_cast<std::size_t>(ny);
        double s = 0;
        for (std::size_t x = 0; x < nx; ++x) {
            int row = 0;
            for (int y = 0; y < ny; ++y) {
                int k = counts[x * static_cast<std::size_t>(ny) + static_cast<std::size_t>(y)];
                row += k;
                s -= nlogn(k);
            }
            s += nlogn(row);
        }
        v = s / n;
    }
    memo_.emplace(std::move(key), v);
    return v;
}

MacMetricTable::MacMetricTable(int nu, int nx, int ny, int nz) : dims_{nu, nx, ny, nz} {
    uz_map_ = projection_map(dims_, {0, 3});
}

double MacMetricTable::operator()(const std::vector<int>& counts) {
    std::string key = key_of(counts);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int n = std::accumulate(counts.begin(), counts.end(), 0);
    std::vector<int> uz(static_cast<std::size_t>(dims_[0] * dims_[3]), 0);
    double s = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        uz[static_cast<std::size_t>(uz_map_[c])] += counts[c];
        s -= nlogn(counts[c]);
    }
    for (int k : uz) s += nlogn(k);
    double v = s / n;
    memo_.emplace(std::move(key), v);
    return v;
}

}  // namespace relexp
