#pragma once

// Information functionals in bits. Divergences that are infinite return +inf;
// +inf is absorbing under addition and compares greater than every finite value.

#include "relexp/core/joint.hpp"

namespace relexp {

// H of the full table (assumed normalized).
double entropy(const Joint& j);
// H of the marginal over `axes`.
double entropy(const Joint& j, const Axes& axes);
// H(a | given)
double cond_entropy(const Joint& j, const Axes& a, const Axes& given);
// I(a ; b | given). Axis sets may not overlap.
double mutual_info(const Joint& j, const Axes& a, const Axes& b, const Axes& given = {});

// D(p || q) for tables of equal shape.
double divergence(const Joint& p, const Joint& q);
// D(V || W | P) = sum_x P(x) D(V(.|x) || W(.|x)). v and w are conditionals with
// the input axes first, p is over the input axes.
double cond_divergence(const Joint& v, const Joint& w, const Joint& p);
// Same quantity from a joint table over (inputs..., outputs...) whose input
// marginal plays the role of P: sum V(a,b) log V(b|a)/W(b|a).
double joint_cond_divergence(const Joint& joint, const Joint& w, int n_in_axes);

// a + b with +inf absorbing
inline double add_inf(double a, double b) { return (a == kInf || b == kInf) ? kInf : a + b; }
inline double positive_part(double x) { return x > 0 ? x : 0.0; }

// Union of axis lists, order preserved, duplicates dropped.
Axes axes_union(const Axes& a, const Axes& b);

}  // namespace relexp
