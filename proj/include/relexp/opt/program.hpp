#pragma once

// Smooth functionals of a flat table built from marginal entropies plus a
// linear part, and a second-order local refinement for problems whose
// objective and constraints are all of that form.

#include <span>
#include <string>
#include <vector>

#include "relexp/core/plan.hpp"
#include "relexp/opt/slice.hpp"

namespace relexp::opt {

// sum_k coef_k * H(axes_k) + <linear, x> + constant, in bits.
struct Functional {
    std::vector<std::pair<Axes, double>> entropy;
    std::vector<double> linear;  // per cell; empty means zero
    double constant = 0;

    Functional& add_entropy(const Axes& a, double coef = 1.0);
    // coef * I(a ; b | given)
    Functional& add_mutual_info(const Axes& a, const Axes& b, const Axes& given = {}, double coef = 1.0);
    // coef * H(target | given)
    Functional& add_cond_entropy(const Axes& target, const Axes& given, double coef = 1.0);
    Functional& add(const Functional& other, double scale = 1.0);
    Functional& add_constant(double c) {
        constant += c;
        return *this;
    }
    double operator()(std::span<const double> x, const std::vector<int>& dims) const;
};

// Minimize `objective` subject to every constraint <= 0.
struct Piece {
    Functional objective;
    std::vector<Functional> constraints;
};

struct PolishOptions {
    int max_iterations = 80;
    double face_threshold = 1e-11;  // cells at or below stay fixed
    double margin = 1e-13;          // constraints are driven to <= -margin
};

struct PolishResult {
    std::vector<double> x;
    double value = kInf;
    bool feasible = false;  // every constraint <= 0 at x
    int iterations = 0;
};

// Feasible when f <= slack.
struct Constraint {
    std::string label;
    Functional f;
    double slack = 0;
};

// Objective base + |excess|^+, or base + excess together with the floor
// excess >= 0 in the linear form, subject to the listed constraints.
struct Composite {
    Functional base;
    Functional excess;
    bool linear = false;
    std::vector<Constraint> constraints;

    // The two smooth programs whose minima cover this one (one in linear form).
    std::vector<Piece> pieces() const;
};

// Evaluates a composite on flat points of a fixed shape. Not thread safe.
class CompositeEvaluator {
public:
    CompositeEvaluator(std::vector<int> dims, Composite c);

    double objective(std::span<const double> x);
    double violation(std::span<const double> x);
    // Labels of constraints within tol of binding; "excess" when the
    // positive part or floor sits at its kink.
    std::vector<std::string> active(std::span<const double> x, double tol = 1e-7);
    // Values of every constraint functional, in order.
    std::vector<double> constraint_values(std::span<const double> x);

private:
    void eval(std::span<const double> x);
    double value(const std::vector<std::pair<int, double>>& terms, const Functional& f, std::span<const double> x) const;

    Composite c_;
    EntropyPlan plan_;
    std::vector<std::pair<int, double>> base_, excess_;
    std::vector<std::vector<std::pair<int, double>>> cons_;
    double vb_ = 0, ve_ = 0;
    std::vector<double> vc_;
};

// Sequential quadratic programming on the face of the slice that contains x
// (cells above the threshold move, the rest are held). Exact entropy Hessians
// are used with eigenvalue clamping. Returns the best feasible point visited,
// or x itself when nothing feasible was seen.
PolishResult polish(const Slice& s, const Piece& piece, std::vector<double> x, const PolishOptions& opt = {});

}  // namespace relexp::opt
