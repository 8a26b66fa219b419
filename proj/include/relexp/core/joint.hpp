#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relexp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bad user input: malformed files, invalid distributions, inconsistent sizes.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A request beyond a configured size or budget limit.
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Axes = std::vector<int>;

// Nonnegative table over a product of finite alphabets.
// Storage is row-major: the last axis varies fastest.
class Joint {
public:
    Joint() = default;
    Joint(std::vector<int> dims, std::vector<double> mass);

    static Joint zeros(std::vector<int> dims);
    static Joint uniform(std::vector<int> dims);
    // Outer product; axes of a come first.
    static Joint product(const Joint& a, const Joint& b);

    int rank() const { return static_cast<int>(dims_.size()); }
    int dim(int axis) const { return dims_.at(static_cast<std::size_t>(axis)); }
    const std::vector<int>& dims() const { return dims_; }
    std::size_t size() const { return mass_.size(); }

    double& operator[](std::size_t i) { return mass_[i]; }
    double operator[](std::size_t i) const { return mass_[i]; }
    double at(std::initializer_list<int> coords) const;
    double& at(std::initializer_list<int> coords);

    std::size_t index(std::span<const int> coords) const;
    void coords(std::size_t flat, std::span<int> out) const;

    std::span<const double> mass() const { return mass_; }
    std::span<double> mass() { return mass_; }

    double total() const;
    void normalize();
    // Entries are finite, nonnegative and sum to one within tol.
    bool is_distribution(double tol = 1e-9) const;

    // Marginal over the listed axes, in the listed order.
    Joint marginal(const Axes& axes) const;
    // Same table with axes reordered: result axis k is source axis order[k].
    Joint permuted(const Axes& order) const;

    double max_abs_diff(const Joint& other) const;

private:
    std::vector<int> dims_;
    std::vector<double> mass_;
};

std::size_t cell_count(const std::vector<int>& dims);

// For each cell of a table with the given dims, the flat index of its
// projection onto `axes` (row-major over those axes).
std::vector<int> projection_map(const std::vector<int>& dims, const Axes& axes);

struct ConditionResult {
    Joint cond;                    // axes: given..., target...; rows sum to one
    std::vector<int> empty_rows;   // flat indices of given-cells with zero mass
};

// Conditional of `target` axes given `given` axes. Zero-mass rows become
// uniform and are reported.
ConditionResult condition(const Joint& j, const Axes& given, const Axes& target);

// p over axes A, cond over (A, B) with rows summing to one -> joint over (A, B).
Joint compose(const Joint& p, const Joint& cond);

// Conditional table W(out | in) with in-dims first; rows must sum to one.
void check_conditional(const Joint& cond, int n_in_axes, double tol, const std::string& what);

}  // namespace relexp
