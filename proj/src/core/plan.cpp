#include "relexp/core/plan.hpp"

#include <algorithm>

#include "relexp/simd/kernels.hpp"

namespace relexp {

EntropyPlan::EntropyPlan(std::vector<int> dims) : dims_(std::move(dims)) {}

int EntropyPlan::add(const Axes& axes) {
    for (std::size_t h = 0; h < axes_.size(); ++h)
        if (axes_[h] == axes) return static_cast<int>(h);
    axes_.push_back(axes);
    maps_.push_back(projection_map(dims_, axes));
    bool ident = axes.size() == dims_.size();
    for (std::size_t k = 0; ident && k < axes.size(); ++k) ident = axes[k] == static_cast<int>(k);
    identity_.push_back(ident ? 1 : 0);
    std::size_t m = 1;
    for (int a : axes) m *= static_cast<std::size_t>(dims_[static_cast<std::size_t>(a)]);
    marg_.emplace_back(m, 0.0);
    entropy_.push_back(0.0);
    return static_cast<int>(axes_.size() - 1);
}

void EntropyPlan::evaluate(std::span<const double> x) {
    for (std::size_t h = 0; h < axes_.size(); ++h) {
        auto& m = marg_[h];
        if (identity_[h]) {
            std::copy(x.begin(), x.end(), m.begin());
        } else {
            std::fill(m.begin(), m.end(), 0.0);
            const auto& map = maps_[h];
            for (std::size_t c = 0; c < x.size(); ++c) m[static_cast<std::size_t>(map[c])] += x[c];
        }
        entropy_[h] = -simd::sum_plog2p(m.data(), m.size());
    }
}

}  // namespace relexp
