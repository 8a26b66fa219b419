#include "relexp/core/joint.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relexp {

std::size_t cell_count(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) {
        if (d <= 0) throw InputError("alphabet sizes must be positive");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

Joint::Joint(std::vector<int> dims, std::vector<double> mass)
    : dims_(std::move(dims)), mass_(std::move(mass)) {
    if (cell_count(dims_) != mass_.size()) throw InputError("table size does not match alphabet sizes");
}

Joint Joint::zeros(std::vector<int> dims) {
    std::size_t n = cell_count(dims);
    return Joint(std::move(dims), std::vector<double>(n, 0.0));
}

Joint Joint::uniform(std::vector<int> dims) {
    std::size_t n = cell_count(dims);
    return Joint(std::move(dims), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Joint Joint::product(const Joint& a, const Joint& b) {
    std::vector<int> dims = a.dims_;
    dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
    std::vector<double> m(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) m[i * b.size() + k] = a[i] * b[k];
    return Joint(std::move(dims), std::move(m));
}

std::size_t Joint::index(std::span<const int> coords) const {
    if (coords.size() != dims_.size()) throw InputError("coordinate rank mismatch");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (coords[k] < 0 || coords[k] >= dims_[k]) throw InputError("coordinate out of range");
        idx = idx * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(coords[k]);
    }
    return idx;
}

void Joint::coords(std::size_t flat, std::span<int> out) const {
    for (std::size_t k = dims_.size(); k-- > 0;) {
        out[k] = static_cast<int>(flat % static_cast<std::size_t>(dims_[k]));
        flat /= static_cast<std::size_t>(dims_[k]);
    }
}

double Joint::at(std::initializer_list<int> c) const {
    return mass_[index(std::span<const int>(c.begin(), c.size()))];
}

double& Joint::at(std::initializer_list<int> c) {
    return mass_[index(std::span<const int>(c.begin(), c.size()))];
}

double Joint::total() const { return std::accumulate(mass_.begin(), mass_.end(), 0.0); }

void Joint::normalize() {
    double t = total();
    if (!(t > 0)) throw InputError("cannot normalize a zero table");
    for (double& v : mass_) v /= t;
}

bool Joint::is_distribution(double tol) const {
    for (double v : mass_)
        if (!std::isfinite(v) || v < 0) return false;
    return std::abs(total() - 1.0) <= tol;
}

std::vector<int> projection_map(const std::vector<int>& dims, const Axes& axes) {
    std::size_t n = cell_count(dims);
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) stride[k - 1] = stride[k] * static_cast<std::size_t>(dims[k]);
    std::vector<int> out(n, 0);
    for (int a : axes)
        if (a < 0 || a >= static_cast<int>(dims.size())) throw InputError("axis out of range");
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t m = 0;
        for (int a : axes) {
            std::size_t coord = (c / stride[static_cast<std::size_t>(a)]) % static_cast<std::size_t>(dims[static_cast<std::size_t>(a)]);
            m = m * static_cast<std::size_t>(dims[static_cast<std::size_t>(a)]) + coord;
        }
        out[c] = static_cast<int>(m);
    }
    return out;
}

Joint Joint::marginal(const Axes& axes) const {
    std::vector<int> mdims;
    for (int a : axes) mdims.push_back(dim(a));
    Joint out = Joint::zeros(mdims);
    std::vector<int> map = projection_map(dims_, axes);
    for (std::size_t c = 0; c < mass_.size(); ++c) out.mass_[static_cast<std::size_t>(map[c])] += mass_[c];
    return out;
}

Joint Joint::permuted(const Axes& order) const {
    if (order.size() != dims_.size()) throw InputError("permutation rank mismatch");
    std::vector<int> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t k = 0; k < check.size(); ++k)
        if (check[k] != static_cast<int>(k)) throw InputError("not a permutation of axes");
    std::vector<int> map = projection_map(dims_, order);
    std::vector<int> pdims;
    for (int a : order) pdims.push_back(dim(a));
    Joint out = Joint::zeros(pdims);
    for (std::size_t c = 0; c < mass_.size(); ++c) out.mass_[static_cast<std::size_t>(map[c])] = mass_[c];
    return out;
}

double Joint::max_abs_diff(const Joint& other) const {
    if (other.dims_ != dims_) return kInf;
    double m = 0;
    for (std::size_t i = 0; i < mass_.size(); ++i) m = std::max(m, std::abs(mass_[i] - other.mass_[i]));
    return m;
}

ConditionResult condition(const Joint& j, const Axes& given, const Axes& target) {
    Axes all = given;
    all.insert(all.end(), target.begin(), target.end());
    Joint gt = j.marginal(all);
    std::size_t rows = 1;
    for (int a : given) rows *= static_cast<std::size_t>(j.dim(a));
    std::size_t width = gt.size() / rows;
    ConditionResult r{gt, {}};
    for (std::size_t row = 0; row < rows; ++row) {
        double s = 0;
        for (std::size_t k = 0; k < width; ++k) s += gt[row * width + k];
        for (std::size_t k = 0; k < width; ++k) {
            if (s > 0)
                r.cond[row * width + k] = gt[row * width + k] / s;
            else
                r.cond[row * width + k] = 1.0 / static_cast<double>(width);
        }
        if (!(s > 0)) r.empty_rows.push_back(static_cast<int>(row));
    }
    return r;
}

Joint compose(const Joint& p, const Joint& cond) {
    if (cond.rank() < p.rank()) throw InputError("conditional rank too small");
    for (int k = 0; k < p.rank(); ++k)
        if (p.dim(k) != cond.dim(k)) throw InputError("conditional input sizes do not match");
    std::size_t width = cond.size() / p.size();
    Joint out = cond;
    for (std::size_t row = 0; row < p.size(); ++row)
        for (std::size_t k = 0; k < width; ++k) out[row * width + k] = p[row] * cond[row * width + k];
    return out;
}

void check_conditional(const Joint& cond, int n_in_axes, double tol, const std::string& what) {
    std::size_t rows = 1;
    for (int k = 0; k < n_in_axes; ++k) rows *= static_cast<std::size_t>(cond.dim(k));
    std::size_t width = cond.size() / rows;
    for (std::size_t row = 0; row < rows; ++row) {
        double s = 0;
        for (std::size_t k = 0; k < width; ++k) {
            double v = cond[row * width + k];
            if (!std::isfinite(v) || v < 0) throw InputError(what + ": entries must be finite and nonnegative");
            s += v;
        }
        if (std::abs(s - 1.0) > tol) throw InputError(what + ": row " + std::to_string(row) + " does not sum to 1");
    }
}

}  // namespace relexp
