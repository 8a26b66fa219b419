#include "relexp/core/info.hpp"

#include <algorithm>
#include <cmath>

#include "relexp/simd/kernels.hpp"

namespace relexp {

Axes axes_union(const Axes& a, const Axes& b) {
    Axes out = a;
    for (int x : b)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
}

double entropy(const Joint& j) {
    auto m = j.mass();
    return -simd::sum_plog2p(m.data(), m.size());
}

double entropy(const Joint& j, const Axes& axes) {
    if (axes.empty()) return 0.0;
    return entropy(j.marginal(axes));
}

double cond_entropy(const Joint& j, const Axes& a, const Axes& given) {
    return entropy(j, axes_union(a, given)) - entropy(j, given);
}

double mutual_info(const Joint& j, const Axes& a, const Axes& b, const Axes& given) {
    for (int x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) throw InputError("mutual_info: overlapping axis sets");
    double v = entropy(j, axes_union(a, given)) + entropy(j, axes_union(b, given)) -
               entropy(j, axes_union(axes_union(a, b), given)) - entropy(j, given);
    return v;
}

double divergence(const Joint& p, const Joint& q) {
    if (p.dims() != q.dims()) throw InputError("divergence: shape mismatch");
    auto pm = p.mass();
    auto qm = q.mass();
    double cross = simd::sum_plog2q(pm.data(), qm.data(), pm.size());
    if (cross == -kInf) return kInf;
    return simd::sum_plog2p(pm.data(), pm.size()) - cross;
}

double cond_divergence(const Joint& v, const Joint& w, const Joint& p) {
    return joint_cond_divergence(compose(p, v), w, p.rank());
}

double joint_cond_divergence(const Joint& joint, const Joint& w, int n_in_axes) {
    if (joint.dims() != w.dims()) throw InputError("conditional divergence: shape mismatch");
    std::size_t rows = 1;
    for (int k = 0; k < n_in_axes; ++k) rows *= static_cast<std::size_t>(joint.dim(k));
    std::size_t width = joint.size() / rows;
    double d = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        double pr = 0;
        for (std::size_t c = 0; c < width; ++c) pr += joint[r * width + c];
        if (!(pr > 0)) continue;
        for (std::size_t c = 0; c < width; ++c) {
            double v = joint[r * width + c];
            if (!(v > 0)) continue;
            double ww = w[r * width + c];
            if (!(ww > 0)) return kInf;
            d += v * std::log2(v / (pr * ww));
        }
    }
    return d;
}

}  // namespace relexp
