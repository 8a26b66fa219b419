#pragma once

// Derivative-free minimization over a slice with extra nonlinear constraints.
// Every reported point lies in the slice and satisfies the constraints, so a
// reported minimum is always an upper bound on the true one.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "relexp/opt/program.hpp"
#include "relexp/opt/slice.hpp"

namespace relexp::opt {

struct Problem {
    Slice slice;
    // Objective, may be +inf.
    std::function<double(std::span<const double>)> objective;
    // Total constraint violation; zero means feasible.
    std::function<double(std::span<const double>)> violation;
    // Optional smooth pieces whose constrained minima together cover the
    // objective over the feasible set; each search result is refined on them.
    std::vector<Piece> pieces;
};

struct SearchOptions {
    double initial_step = 0.05;
    double min_step = 1e-7;
    long max_evals = 400000;
};

struct SearchResult {
    std::vector<double> x;
    double value = kInf;
    bool feasible = false;
    long evals = 0;
};

// Adaptive coordinate search along the move set; only feasible points with
// finite objective are accepted. x0 must be feasible.
SearchResult pattern_search(const Problem& p, const MoveSet& moves, std::vector<double> x0, const SearchOptions& opt,
                            Rng& rng);

// Drives the violation to zero from x0 using the same search. Returns a
// feasible point or nothing.
std::optional<std::vector<double>> find_feasible(const Problem& p, const MoveSet& moves, std::vector<double> x0,
                                                 const SearchOptions& opt, Rng& rng);

struct SolveOptions {
    int restarts = 8;                             // random starting points
    std::vector<std::vector<double>> seeds;       // extra starting points
    SearchOptions search;
    std::uint64_t seed = 1;
};

struct Certificate {
    double lattice_value = kInf;     // best lattice value, if a lattice pass ran
    long lattice_points = 0;
    long lattice_feasible = 0;
    int lattice_denominator = 0;
    double refined_value = kInf;     // best value after local search
    std::vector<double> start_values;  // final value of each converged start
    double dispersion = 0;           // max - min over converged starts
    int starts = 0;
    int feasible_starts = 0;
    long evals = 0;
    int polished = 0;               // starts improved by second-order refinement
};

struct SolveResult {
    double value = kInf;
    std::vector<double> argmin;
    bool feasible = false;  // false: no feasible point found (value is +inf)
    Certificate cert;
};

// Problem over the slice with the composite as objective and constraints; the
// callbacks share one evaluator, so the problem must be used from one thread.
Problem make_problem(const Slice& s, const Composite& c);

// Multi-start local search from the seeds and random starts.
SolveResult minimize(const Problem& p, const SolveOptions& opt);

// True when x lies in the slice (within tol) and has no violation.
bool is_feasible(const Problem& p, std::span<const double> x, double tol = 1e-9);

}  // namespace relexp::opt
