#pragma once

// Tables over a product alphabet with some marginals held fixed. Points are
// flat row-major vectors over all cells.

#include <array>
#include <span>
#include <vector>

#include "relexp/core/joint.hpp"
#include "relexp/core/types.hpp"

namespace relexp::opt {

struct Pin {
    Axes axes;
    std::vector<double> target;  // required marginal, row-major over axes
};

struct Slice {
    std::vector<int> dims;
    std::vector<Pin> pins;
    std::vector<char> support;  // empty means every cell is allowed

    std::size_t cells() const { return cell_count(dims); }
    bool allowed(std::size_t c) const { return support.empty() || support[c] != 0; }
};

// Direction that keeps every pinned marginal fixed and touches at most four cells.
struct Move {
    int len = 0;
    std::array<int, 4> cell{};
    std::array<double, 4> coef{};
};

// Sparse spanning set for the directions inside the slice, padded with dense
// null-space vectors when sparse moves do not span.
struct MoveSet {
    std::vector<Move> sparse;
    std::vector<std::vector<double>> dense;
    int dimension = 0;
};

MoveSet build_moves(const Slice& s);

// Largest |marginal - target| over all pins, plus |total - 1|.
double slice_residual(std::span<const double> x, const Slice& s);
// Iterative proportional fitting onto the pinned marginals. Zero cells stay zero.
bool ipf_project(std::vector<double>& x, const Slice& s, int max_sweeps = 5000, double tol = 1e-13);
// Random point with full support on allowed cells.
std::vector<double> random_start(const Slice& s, Rng& rng);
// Uniform table on the allowed cells fitted to the pins.
std::vector<double> interior_point(const Slice& s);

// Every lattice point of the slice at denominator n. Returns false when the
// targets are not multiples of 1/n (nothing is visited then).
bool for_each_lattice_point(const Slice& s, int n, const std::function<void(std::span<const double>)>& visit);

}  // namespace relexp::opt
