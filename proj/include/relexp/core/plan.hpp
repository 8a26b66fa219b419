#pragma once

// Repeated marginal entropies of flat tables with a fixed shape.

#include <span>
#include <vector>

#include "relexp/core/joint.hpp"

namespace relexp {

class EntropyPlan {
public:
    explicit EntropyPlan(std::vector<int> dims);

    // Registers a marginal and returns its handle; repeated axes lists share a handle.
    int add(const Axes& axes);
    // Recomputes every registered marginal and its entropy.
    void evaluate(std::span<const double> x);

    double entropy(int handle) const { return entropy_[static_cast<std::size_t>(handle)]; }
    std::span<const double> marginal(int handle) const { return marg_[static_cast<std::size_t>(handle)]; }
    const std::vector<int>& dims() const { return dims_; }
    const Axes& axes(int handle) const { return axes_[static_cast<std::size_t>(handle)]; }
    // Cell -> marginal cell index for a handle.
    const std::vector<int>& map(int handle) const { return maps_[static_cast<std::size_t>(handle)]; }
    int size() const { return static_cast<int>(axes_.size()); }

private:
    std::vector<int> dims_;
    std::vector<Axes> axes_;
    std::vector<std::vector<int>> maps_;
    std::vector<char> identity_;
    std::vector<std::vector<double>> marg_;
    std::vector<double> entropy_;
};

}  // namespace relexp
