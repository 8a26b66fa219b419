#pragma once

// Information functions of the two-user analysis. Joints carry the roles
// U, X, Y, the competing codewords X~, Y~, the second-order copies X^, Y^
// and the output Z on arbitrary axes; Roles says where each one sits.

#include "relexp/core/joint.hpp"

namespace relexp::mac {

struct Roles {
    int u = -1, x = -1, y = -1, xt = -1, yt = -1, xh = -1, yh = -1, z = -1;
};

// Roles of a joint whose axes are listed in this order; absent roles omitted.
Roles roles_uxy(int u = 0, int x = 1, int y = 2);

// I(X;Y|U)
double f_u(const Joint& v, const Roles& r);
// I(X;Y|U) + I(X~;XY|U) - R_X
double f_x(const Joint& v, const Roles& r, double rx);
// I(X;Y|U) + I(Y~;XY|U) - R_Y
double f_y(const Joint& v, const Roles& r, double ry);
// I(X;Y|U) + I(X~;Y~|U) + I(X~Y~;XY|U) - R_X - R_Y
double f_xy(const Joint& v, const Roles& r, double rx, double ry);

// I(X^;XYX~|U) + I(X~;XY|U) + I(X;Y|U) - 2R_X
double es_x(const Joint& v, const Roles& r, double rx);
// I(Y^;XYY~|U) + I(Y~;XY|U) + I(X;Y|U) - 2R_Y
double es_y(const Joint& v, const Roles& r, double ry);
// I(X^Y^;XYX~Y~|U) + I(X~Y~;XY|U) + I(X;Y|U) + I(X~;Y~|U) + I(X^;Y^|U) - 2R_X - 2R_Y
double es_xy(const Joint& v, const Roles& r, double rx, double ry);

struct FValues {
    double fu = 0, fx = 0, fy = 0, fxy = 0;
};
// Each entry needs its roles present; missing ones are left NaN.
FValues f_functions(const Joint& v, const Roles& r, double rx, double ry);

struct ESValues {
    double esx = 0, esy = 0, esxy = 0;
};
ESValues es_functions(const Joint& v, const Roles& r, double rx, double ry);

// Minimum-equivocation metric H(XY|ZU) with the X and Y roles taken from r.
double alpha_equivocation(const Joint& v, const Roles& r);

}  // namespace relexp::mac
