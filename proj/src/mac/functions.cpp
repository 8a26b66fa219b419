#include "relexp/mac/functions.hpp"

#include <cmath>
#include <limits>

#include "relexp/core/info.hpp"

namespace relexp::mac {

namespace {

Axes need(std::initializer_list<int> roles) {
    Axes a;
    for (int r : roles) {
        if (r < 0) throw InputError("joint lacks a role this function needs");
        a.push_back(r);
    }
    return a;
}

bool has(std::initializer_list<int> roles) {
    for (int r : roles)
        if (r < 0) return false;
    return true;
}

}  // namespace

Roles roles_uxy(int u, int x, int y) {
    Roles r;
    r.u = u;
    r.x = x;
    r.y = y;
    return r;
}

double f_u(const Joint& v, const Roles& r) { return mutual_info(v, need({r.x}), need({r.y}), need({r.u})); }

double f_x(const Joint& v, const Roles& r, double rx) {
    return f_u(v, r) + mutual_info(v, need({r.xt}), need({r.x, r.y}), need({r.u})) - rx;
}

double f_y(const Joint& v, const Roles& r, double ry) {
    return f_u(v, r) + mutual_info(v, need({r.yt}), need({r.x, r.y}), need({r.u})) - ry;
}

double f_xy(const Joint& v, const Roles& r, double rx, double ry) {
    Axes u = need({r.u});
    return f_u(v, r) + mutual_info(v, need({r.xt}), need({r.yt}), u) +
           mutual_info(v, need({r.xt, r.yt}), need({r.x, r.y}), u) - rx - ry;
}

double es_x(const Joint& v, const Roles& r, double rx) {
    Axes u = need({r.u});
    return mutual_info(v, need({r.xh}), need({r.x, r.y, r.xt}), u) + mutual_info(v, need({r.xt}), need({r.x, r.y}), u) +
           f_u(v, r) - 2 * rx;
}

double es_y(const Joint& v, const Roles& r, double ry) {
    Axes u = need({r.u});
    return mutual_info(v, need({r.yh}), need({r.x, r.y, r.yt}), u) + mutual_info(v, need({r.yt}), need({r.x, r.y}), u) +
           f_u(v, r) - 2 * ry;
}

double es_xy(const Joint& v, const Roles& r, double rx, double ry) {
    Axes u = need({r.u});
    return mutual_info(v, need({r.xh, r.yh}), need({r.x, r.y, r.xt, r.yt}), u) +
           mutual_info(v, need({r.xt, r.yt}), need({r.x, r.y}), u) + f_u(v, r) +
           mutual_info(v, need({r.xt}), need({r.yt}), u) + mutual_info(v, need({r.xh}), need({r.yh}), u) - 2 * rx -
           2 * ry;
}

FValues f_functions(const Joint& v, const Roles& r, double rx, double ry) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    FValues f{nan, nan, nan, nan};
    if (!has({r.u, r.x, r.y})) return f;
    f.fu = f_u(v, r);
    if (r.xt >= 0) f.fx = f_x(v, r, rx);
    if (r.yt >= 0) f.fy = f_y(v, r, ry);
    if (r.xt >= 0 && r.yt >= 0) f.fxy = f_xy(v, r, rx, ry);
    return f;
}

ESValues es_functions(const Joint& v, const Roles& r, double rx, double ry) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ESValues e{nan, nan, nan};
    if (!has({r.u, r.x, r.y})) return e;
    if (has({r.xt, r.xh})) e.esx = es_x(v, r, rx);
    if (has({r.yt, r.yh})) e.esy = es_y(v, r, ry);
    if (has({r.xt, r.yt, r.xh, r.yh})) e.esxy = es_xy(v, r, rx, ry);
    return e;
}

double alpha_equivocation(const Joint& v, const Roles& r) {
    return cond_entropy(v, need({r.x, r.y}), need({r.z, r.u}));
}

}  // namespace relexp::mac
