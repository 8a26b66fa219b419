#pragma once

// Error exponents of constant-composition two-user codes on a discrete
// memoryless multiple-access channel W(z|x,y) with time sharing U.
//
// Each family is a minimum over the error branches beta in {X, Y, XY} (which
// of the two messages is wrong). Branch problems live on joints with axes
//   X:  (U, X, Y, X~, Z)
//   Y:  (U, X, Y, Y~, Z)
//   XY: (U, X, Y, X~, Y~, Z)
// and the reference exponent on (U, X, Y, Z).

#include <array>
#include <string>
#include <vector>

#include "relexp/dmc/exponents.hpp"
#include "relexp/mac/functions.hpp"

namespace relexp::mac {

using dmc::Family;

enum class Branch { X, Y, XY };
std::string branch_name(Branch b);
inline constexpr std::array<Branch, 3> kBranches{Branch::X, Branch::Y, Branch::XY};

struct Input {
    Joint p;   // P over (U, X, Y) with X - U - Y
    Joint w;   // W over (X, Y, Z), rows sum to 1
    double rx = 0, ry = 0;
    Metric metric = Metric::min_equivocation;
};

// Throws InputError on shape, stochasticity or X - U - Y violations.
void validate(const Input& in, double tol = 1e-9);

// Dimensions and roles of a branch joint (see the axis lists above).
std::vector<int> branch_dims(Branch b, const Input& in);
Roles branch_roles(Branch b);
Roles reference_roles();

// Objective of a branch at v: D(V_{Z|XYU}||W|V_{XYU}) + I(X;Y|U) + |excess|^+,
// or the linear form without the positive part.
double objective(Branch b, const Joint& v, const Input& in, bool linear);
// Membership of v in the family's branch set; violated labels are appended.
bool membership(Family f, Branch b, const Joint& v, const Input& in, double tol = 1e-9,
                std::vector<std::string>* violated = nullptr);

struct Options {
    int grid_denominator = 8;        // largest lattice denominator tried; 0 disables
    int max_lattice_cells = 32;
    double max_lattice_points = 2e6; // stars-and-bars bound on the enumeration
    int lattice_seeds = 2;
    int restarts = 6;
    std::uint64_t seed = 1;
    // Short searches: most of the accuracy comes from the second-order
    // refinement that follows each one.
    opt::SearchOptions search{0.05, 1e-3, 1000};
};

struct BranchResult {
    Branch branch = Branch::X;
    double value = kInf;
    bool feasible = false;
    Joint argmin;
    std::vector<std::string> active;  // binding constraints at the argmin
    opt::Certificate cert;
};

struct Result {
    Family family = Family::r;
    double value = kInf;
    Branch winner = Branch::X;
    std::array<BranchResult, 3> branches;
};

// Solves several families; within each branch, every point found for one
// family is offered to the others, so nested sets give ordered values.
std::vector<Result> compute_exponents(const Input& in, const std::vector<Family>& families, const Options& opt);
Result compute_exponent(const Input& in, Family f, const Options& opt);

// Reference random-coding exponent: per branch, the minimum over V(U,X,Y,Z)
// with pinned (U,X) and (U,Y) marginals of D + I(X;Y|U) + |J - rate|^+ where J
// is I(X;YZ|U), I(Y;XZ|U) or I(XY;Z|U) + I(X;Y|U). No metric constraint.
struct ReferenceResult {
    double value = kInf;
    Branch winner = Branch::X;
    std::array<BranchResult, 3> branches;
};
ReferenceResult reference_exponent(const Input& in, const Options& opt);
double reference_objective(Branch b, const Joint& v, const Input& in);

struct Comparison {
    double e_r = kInf, e_t = kInf, e_ex = kInf, reference = kInf;
    double gap_r = 0, gap_t = 0, gap_ex = 0;  // family minus reference
    bool ordered = false;                     // e_ex >= e_t >= e_r
    bool pass = false;                        // every gap >= -tolerance and ordered
};
Comparison compare_with_reference(const Input& in, const Options& opt, double tolerance = 1e-4);

// Random P_U P_{X|U} P_{Y|U} with flat Dirichlet factors.
Joint sample_input_distribution(int nu, int nx, int ny, Rng& rng);

}  // namespace relexp::mac
