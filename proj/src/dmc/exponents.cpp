#include "relexp/dmc/exponents.hpp"

#include <cmath>

#include "relexp/core/info.hpp"

namespace relexp::dmc {

Family parse_family(const std::string& s) {
    if (s == "r") return Family::r;
    if (s == "rL") return Family::rL;
    if (s == "T") return Family::T;
    if (s == "TL") return Family::TL;
    if (s == "ex") return Family::ex;
    throw InputError("unknown exponent family: " + s);
}

std::string family_name(Family f) {
    switch (f) {
        case Family::r: return "r";
        case Family::rL: return "rL";
        case Family::T: return "T";
        case Family::TL: return "TL";
        case Family::ex: return "ex";
    }
    return "?";
}

std::vector<Family> all_families() { return {Family::r, Family::rL, Family::T, Family::TL, Family::ex}; }

Quantities quantities(const Joint& v, const Joint& w, Metric m) {
    if (v.rank() != 3 || w.rank() != 2 || v.dim(0) != w.dim(0) || v.dim(1) != w.dim(0) || v.dim(2) != w.dim(1))
        throw InputError("V must be over (X, X~, Y) matching the channel");
    Quantities q;
    Joint xy = v.marginal({0, 2});
    Joint ty = v.marginal({1, 2});
    q.divergence = joint_cond_divergence(xy, w, 1);
    q.i_cand = std::max(0.0, mutual_info(v, {1}, {0, 2}));
    q.i_pair = std::max(0.0, mutual_info(v, {0}, {1}));
    q.alpha_sent = alpha_p2p(m, xy, w);
    q.alpha_cand = alpha_p2p(m, ty, w);
    return q;
}

double family_objective(Family f, const Quantities& q, double rate) {
    switch (f) {
        case Family::r:
        case Family::T:
        case Family::ex: return add_inf(q.divergence, positive_part(q.i_cand - rate));
        case Family::rL:
        case Family::TL: return add_inf(q.divergence, q.i_cand - rate);
    }
    return kInf;
}

namespace {

double pair_cap(Family f, double rate) {
    switch (f) {
        case Family::T:
        case Family::TL: return 2 * rate;
        case Family::ex: return rate;
        default: return kInf;
    }
}

bool has_floor(Family f) { return f == Family::rL || f == Family::TL; }

}  // namespace

bool family_member(Family f, const Quantities& q, double rate, double tol) {
    if (!alpha_leq(q.alpha_cand, q.alpha_sent)) return false;
    if (q.i_pair > pair_cap(f, rate) + tol) return false;
    if (has_floor(f) && q.i_cand < rate - tol) return false;
    return true;
}

double family_violation(Family f, const Quantities& q, double rate) {
    double v = 0;
    if (!alpha_leq(q.alpha_cand, q.alpha_sent)) v += q.alpha_cand == kInf ? 10.0 : q.alpha_cand - q.alpha_sent;
    v += positive_part(q.i_pair - pair_cap(f, rate));
    if (has_floor(f)) v += positive_part(rate - q.i_cand);
    return v;
}

double objective(Family f, const Joint& v, double rate, const Joint& w, Metric m) {
    return family_objective(f, quantities(v, w, m), rate);
}

bool membership(Family f, const Joint& v, const Joint& p, double rate, const Joint& w, Metric m, double tol,
                std::vector<std::string>* violated) {
    std::vector<std::string> labels;
    if (!v.is_distribution(tol)) labels.push_back("distribution");
    if (v.marginal({0}).max_abs_diff(p) > tol || v.marginal({1}).max_abs_diff(p) > tol) labels.push_back("marginal");
    if (labels.empty()) {
        Quantities q = quantities(v, w, m);
        if (!alpha_leq(q.alpha_cand, q.alpha_sent)) labels.push_back("alpha");
        if (q.i_pair > pair_cap(f, rate) + tol) labels.push_back(f == Family::ex ? "pair-cap-R" : "pair-cap-2R");
        if (has_floor(f) && q.i_cand < rate - tol) labels.push_back("floor");
    }
    if (violated) violated->insert(violated->end(), labels.begin(), labels.end());
    return labels.empty();
}

std::vector<std::string> active_constraints(Family f, const Quantities& q, double rate, double tol) {
    std::vector<std::string> a;
    if (alpha_leq(q.alpha_cand, q.alpha_sent) && alpha_leq(q.alpha_sent, q.alpha_cand + tol)) a.push_back("alpha");
    double cap = pair_cap(f, rate);
    if (cap < kInf && q.i_pair >= cap - tol) a.push_back(f == Family::ex ? "pair-cap-R" : "pair-cap-2R");
    if (has_floor(f) && q.i_cand <= rate + tol) a.push_back("floor");
    if (!has_floor(f) && q.i_cand > rate + tol) a.push_back("positive-part");
    return a;
}

}  // namespace relexp::dmc
