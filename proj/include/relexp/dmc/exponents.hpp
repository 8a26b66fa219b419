#pragma once

// Error exponents of constant-composition codes on a discrete memoryless
// channel under a type-based decoding metric.
//
// All families minimize over joint distributions V of (X, X~, Y) whose X and
// X~ marginals equal P and which satisfy alpha(P, V_{Y|X~}) <= alpha(P, V_{Y|X}).
// Axis order of V is (X, X~, Y).

#include <string>
#include <vector>

#include "relexp/core/joint.hpp"
#include "relexp/decoding/metric.hpp"
#include "relexp/opt/search.hpp"

namespace relexp::dmc {

enum class Family {
    r,   // random coding: D + |I(X~;XY) - R|^+
    rL,  // linear form, restricted to I(X~;XY) >= R
    T,   // random coding with I(X;X~) <= 2R
    TL,  // linear form of T with I(X~;XY) >= R
    ex,  // random coding with I(X;X~) <= R
};

Family parse_family(const std::string& s);
std::string family_name(Family f);
std::vector<Family> all_families();

// Functionals of a point V that the objectives and constraints use.
struct Quantities {
    double divergence = 0;   // D(V_{Y|X} || W | P)
    double i_cand = 0;       // I(X~ ; X Y)
    double i_pair = 0;       // I(X ; X~)
    double alpha_sent = 0;   // alpha(P, V_{Y|X})
    double alpha_cand = 0;   // alpha(P, V_{Y|X~})
};

Quantities quantities(const Joint& v, const Joint& w, Metric m);

double family_objective(Family f, const Quantities& q, double rate);
// Set membership; alpha ties count as members, caps and floors use tol.
bool family_member(Family f, const Quantities& q, double rate, double tol = 1e-12);
double family_violation(Family f, const Quantities& q, double rate);

// Objective at V (ignores membership).
double objective(Family f, const Joint& v, double rate, const Joint& w, Metric m);
// V has X and X~ marginals equal to p and lies in the family's set. Labels of
// failed checks ("distribution", "marginal", "alpha", "pair-cap-2R",
// "pair-cap-R", "floor") are appended to violated.
bool membership(Family f, const Joint& v, const Joint& p, double rate, const Joint& w, Metric m, double tol = 1e-9,
                std::vector<std::string>* violated = nullptr);
// Constraints binding within tol at a point, plus "positive-part" when the
// |I - R|^+ term is strictly positive.
std::vector<std::string> active_constraints(Family f, const Quantities& q, double rate, double tol = 1e-6);

struct Options {
    int grid_denominator = 24;     // lattice pass; 0 disables it
    int max_lattice_cells = 16;
    int lattice_seeds = 3;         // best lattice points refined per family
    int restarts = 4;
    std::uint64_t seed = 1;
    opt::SearchOptions search{};
};

struct Result {
    Family family = Family::r;
    double rate = 0;
    double value = kInf;        // +inf when the set is empty
    bool feasible = false;
    Joint argmin;               // over (X, X~, Y)
    Quantities at_argmin;
    opt::Certificate cert;
};

// Solves several families at one rate. Each family's minimum is taken over
// every point found for any family, so nested sets give ordered values.
std::vector<Result> compute_exponents(const Joint& w, const Joint& p, Metric m, double rate,
                                      const std::vector<Family>& families, const Options& opt,
                                      const std::vector<Joint>& warm = {});
Result compute_exponent(const Joint& w, const Joint& p, Metric m, double rate, Family f, const Options& opt);

struct CompositionResult {
    Joint p;
    double value = kInf;
    Result inner;
    std::vector<std::pair<Joint, double>> evaluated;
};

// max over input distributions P of the family exponent: a grid over the
// simplex with the given denominator, then local refinement of the best point.
// Families in `companions` are solved alongside f at every P and share points with it.
CompositionResult maximize_over_composition(const Joint& w, Metric m, double rate, Family f, const Options& opt,
                                            int simplex_denominator = 20,
                                            const std::vector<Family>& companions = {});

struct CriticalRate {
    double rate = 0;
    // (rate, positive-part term active at the random-coding minimizer)
    std::vector<std::pair<double, bool>> samples;
};

// Largest rate at which the minimizer of the random-coding family has
// I(X~;XY) > R, by bisection on [0, H(P)] to the given resolution.
CriticalRate critical_rate(const Joint& w, const Joint& p, Metric m, const Options& opt, double resolution = 1e-3);

struct LinearFormCheck {
    double rate = 0;
    double max_linear = kInf;  // max_P of the rL exponent
    double max_random = kInf;  // max_P of the r exponent
    Joint p_linear, p_random;
    double gap = kInf;
    bool pass = false;
};

// Compares max_P of the rL and r families at a rate.
LinearFormCheck verify_linear_form(const Joint& w, Metric m, double rate, const Options& opt, double tolerance,
                                    int simplex_denominator = 20);

// Axis helpers for V over (X, X~, Y).
opt::Slice coupling_slice(const Joint& w, const Joint& p);

}  // namespace relexp::dmc
