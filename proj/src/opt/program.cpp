#include "relexp/opt/program.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "relexp/core/info.hpp"
#include "relexp/core/plan.hpp"

namespace relexp::opt {

Functional& Functional::add_entropy(const Axes& a, double coef) {
    if (coef == 0 || a.empty()) return *this;
    Axes s = a;
    std::sort(s.begin(), s.end());
    for (auto& [axes, c] : entropy)
        if (axes == s) {
            c += coef;
            return *this;
        }
    entropy.emplace_back(std::move(s), coef);
    return *this;
}

Functional& Functional::add_mutual_info(const Axes& a, const Axes& b, const Axes& given, double coef) {
    add_entropy(axes_union(a, given), coef);
    add_entropy(axes_union(b, given), coef);
    add_entropy(axes_union(axes_union(a, b), given), -coef);
    add_entropy(given, -coef);
    return *this;
}

Functional& Functional::add_cond_entropy(const Axes& target, const Axes& given, double coef) {
    add_entropy(axes_union(target, given), coef);
    add_entropy(given, -coef);
    return *this;
}

Functional& Functional::add(const Functional& other, double scale) {
    for (const auto& [a, c] : other.entropy) add_entropy(a, c * scale);
    if (!other.linear.empty()) {
        if (linear.empty()) linear.assign(other.linear.size(), 0.0);
        for (std::size_t k = 0; k < linear.size(); ++k) linear[k] += scale * other.linear[k];
    }
    constant += scale * other.constant;
    return *this;
}

double Functional::operator()(std::span<const double> x, const std::vector<int>& dims) const {
    EntropyPlan plan(dims);
    std::vector<int> h;
    for (const auto& e : entropy) h.push_back(plan.add(e.first));
    plan.evaluate(x);
    double v = constant;
    for (std::size_t k = 0; k < entropy.size(); ++k) v += entropy[k].second * plan.entropy(h[k]);
    for (std::size_t c = 0; c < linear.size(); ++c) v += linear[c] * x[c];
    return v;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Objective (index 0) and constraints compiled against one entropy plan.
class Compiled {
public:
    Compiled(const std::vector<int>& dims, const Piece& piece) : plan_(dims) {
        funcs_.push_back(&piece.objective);
        for (const auto& c : piece.constraints) funcs_.push_back(&c);
        std::vector<std::vector<std::pair<int, double>>> raw;
        for (const Functional* f : funcs_) {
            raw.emplace_back();
            for (const auto& [a, c] : f->entropy) raw.back().push_back({plan_.add(a), c});
        }
        coef_.assign(funcs_.size(), std::vector<double>(static_cast<std::size_t>(plan_.size()), 0.0));
        for (std::size_t f = 0; f < raw.size(); ++f)
            for (auto [h, c] : raw[f]) coef_[f][static_cast<std::size_t>(h)] += c;
    }

    std::size_t count() const { return funcs_.size(); }
    const EntropyPlan& plan() const { return plan_; }
    const std::vector<double>& coef(std::size_t f) const { return coef_[f]; }

    void values(std::span<const double> x, std::vector<double>& out) {
        plan_.evaluate(x);
        out.assign(funcs_.size(), 0.0);
        for (std::size_t f = 0; f < funcs_.size(); ++f) {
            double v = funcs_[f]->constant;
            for (std::size_t h = 0; h < coef_[f].size(); ++h)
                if (coef_[f][h] != 0) v += coef_[f][h] * plan_.entropy(static_cast<int>(h));
            const auto& lin = funcs_[f]->linear;
            for (std::size_t c = 0; c < lin.size(); ++c)
                if (x[c] != 0) v += lin[c] * x[c];
            out[f] = v;
        }
    }

    // Gradient over the free cells (additive constants shared by all cells dropped).
    // Requires a prior values() call at the same point.
    void gradients(const std::vector<int>& free, std::vector<VectorXd>& out) const {
        auto nf = static_cast<Eigen::Index>(free.size());
        out.assign(funcs_.size(), VectorXd::Zero(nf));
        std::vector<double> lg(free.size());
        for (int h = 0; h < plan_.size(); ++h) {
            bool used = false;
            for (const auto& c : coef_) used = used || c[static_cast<std::size_t>(h)] != 0;
            if (!used) continue;
            auto m = plan_.marginal(h);
            const auto& map = plan_.map(h);
            for (std::size_t i = 0; i < free.size(); ++i)
                lg[i] = -std::log2(m[static_cast<std::size_t>(map[static_cast<std::size_t>(free[i])])]);
            for (std::size_t f = 0; f < funcs_.size(); ++f) {
                double c = coef_[f][static_cast<std::size_t>(h)];
                if (c == 0) continue;
                for (std::size_t i = 0; i < free.size(); ++i) out[f](static_cast<Eigen::Index>(i)) += c * lg[i];
            }
        }
        for (std::size_t f = 0; f < funcs_.size(); ++f) {
            const auto& lin = funcs_[f]->linear;
            if (lin.empty()) continue;
            for (std::size_t i = 0; i < free.size(); ++i)
                out[f](static_cast<Eigen::Index>(i)) += lin[static_cast<std::size_t>(free[i])];
        }
    }

    // Z^T (sum_h w_h Hess H_h) Z.
    MatrixXd reduced_hessian(const std::vector<double>& w, const std::vector<int>& free, const MatrixXd& z) const {
        const double inv_ln2 = 1.0 / std::numbers::ln2;
        MatrixXd b = MatrixXd::Zero(z.cols(), z.cols());
        for (int h = 0; h < plan_.size(); ++h) {
            double wh = w[static_cast<std::size_t>(h)];
            if (wh == 0) continue;
            auto m = plan_.marginal(h);
            const auto& map = plan_.map(h);
            MatrixXd s = MatrixXd::Zero(static_cast<Eigen::Index>(m.size()), z.cols());
            for (std::size_t i = 0; i < free.size(); ++i)
                s.row(map[static_cast<std::size_t>(free[i])]) += z.row(static_cast<Eigen::Index>(i));
            VectorXd d(static_cast<Eigen::Index>(m.size()));
            for (std::size_t g = 0; g < m.size(); ++g)
                d(static_cast<Eigen::Index>(g)) = m[g] > 0 ? -wh * inv_ln2 / m[g] : 0.0;
            b.noalias() += s.transpose() * d.asDiagonal() * s;
        }
        return 0.5 * (b + b.transpose());
    }

private:
    EntropyPlan plan_;
    std::vector<const Functional*> funcs_;
    std::vector<std::vector<double>> coef_;
};

// Orthonormal basis of the directions over the free cells that keep every pin.
MatrixXd face_basis(const Slice& s, const std::vector<int>& free) {
    std::vector<std::vector<int>> maps;
    Eigen::Index rows = 1;
    for (const auto& pin : s.pins) {
        maps.push_back(projection_map(s.dims, pin.axes));
        rows += static_cast<Eigen::Index>(pin.target.size());
    }
    MatrixXd a = MatrixXd::Zero(rows, static_cast<Eigen::Index>(free.size()));
    for (std::size_t i = 0; i < free.size(); ++i) {
        auto col = static_cast<Eigen::Index>(i);
        a(0, col) = 1.0;
        Eigen::Index off = 1;
        for (std::size_t p = 0; p < s.pins.size(); ++p) {
            a(off + maps[p][static_cast<std::size_t>(free[i])], col) = 1.0;
            off += static_cast<Eigen::Index>(s.pins[p].target.size());
        }
    }
    // trailing columns of Q in a rank-revealing QR of A^T span the kernel of A
    Eigen::ColPivHouseholderQR<MatrixXd> qr(a.transpose());
    qr.setThreshold(1e-10);
    Eigen::Index n = a.cols(), rank = qr.rank();
    if (rank == n) return MatrixXd(n, 0);
    MatrixXd tail = MatrixXd::Zero(n, n - rank);
    tail.bottomRows(n - rank).setIdentity();
    return qr.householderQ() * tail;
}

// min 1/2 l'Ml + v'l over l >= 0 by cyclic coordinate descent.
VectorXd nonneg_qp(const MatrixXd& m, const VectorXd& v) {
    Eigen::Index n = v.size();
    VectorXd l = VectorXd::Zero(n);
    for (int sweep = 0; sweep < 5000; ++sweep) {
        double change = 0, scale = 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(m(i, i) > 1e-300)) continue;
            double gi = m.row(i).dot(l) + v(i);
            double ni = std::clamp(l(i) - gi / m(i, i), 0.0, 1e8);
            change = std::max(change, std::abs(ni - l(i)));
            scale = std::max(scale, ni);
            l(i) = ni;
        }
        if (change <= 1e-15 * scale) break;
    }
    return l;
}

}  // namespace

std::vector<Piece> Composite::pieces() const {
    std::vector<Piece> out;
    std::vector<Functional> cons;
    for (const auto& c : constraints) cons.push_back(Functional(c.f).add_constant(-c.slack));
    if (!linear) {
        Piece below{base, cons};
        below.constraints.push_back(excess);
        out.push_back(std::move(below));
    }
    Piece above{Functional(base).add(excess), cons};
    above.constraints.push_back(Functional().add(excess, -1.0));
    out.push_back(std::move(above));
    return out;
}

CompositeEvaluator::CompositeEvaluator(std::vector<int> dims, Composite c) : c_(std::move(c)), plan_(std::move(dims)) {
    auto compile = [&](const Functional& f) {
        std::vector<std::pair<int, double>> t;
        for (const auto& [a, k] : f.entropy) t.push_back({plan_.add(a), k});
        return t;
    };
    base_ = compile(c_.base);
    excess_ = compile(c_.excess);
    for (const auto& k : c_.constraints) cons_.push_back(compile(k.f));
}

double CompositeEvaluator::value(const std::vector<std::pair<int, double>>& terms, const Functional& f,
                                 std::span<const double> x) const {
    double v = f.constant;
    for (auto [h, k] : terms) v += k * plan_.entropy(h);
    for (std::size_t c = 0; c < f.linear.size(); ++c)
        if (x[c] != 0) v += f.linear[c] * x[c];
    return v;
}

void CompositeEvaluator::eval(std::span<const double> x) {
    plan_.evaluate(x);
    vb_ = value(base_, c_.base, x);
    ve_ = value(excess_, c_.excess, x);
    vc_.resize(cons_.size());
    for (std::size_t k = 0; k < cons_.size(); ++k) vc_[k] = value(cons_[k], c_.constraints[k].f, x);
}

double CompositeEvaluator::objective(std::span<const double> x) {
    eval(x);
    return c_.linear ? vb_ + ve_ : vb_ + std::max(0.0, ve_);
}

double CompositeEvaluator::violation(std::span<const double> x) {
    eval(x);
    double v = 0;
    for (std::size_t k = 0; k < vc_.size(); ++k) v += std::max(0.0, vc_[k] - c_.constraints[k].slack);
    if (c_.linear) v += std::max(0.0, -ve_);
    return v;
}

std::vector<std::string> CompositeEvaluator::active(std::span<const double> x, double tol) {
    eval(x);
    std::vector<std::string> out;
    for (std::size_t k = 0; k < vc_.size(); ++k)
        if (vc_[k] >= c_.constraints[k].slack - tol) out.push_back(c_.constraints[k].label);
    if (std::abs(ve_) <= tol) out.push_back("excess");
    return out;
}

std::vector<double> CompositeEvaluator::constraint_values(std::span<const double> x) {
    eval(x);
    return vc_;
}

PolishResult polish(const Slice& s, const Piece& piece, std::vector<double> x, const PolishOptions& opt) {
    PolishResult res;
    Compiled prog(s.dims, piece);
    const std::size_t ncons = prog.count() - 1;
    std::vector<double> val;

    auto consider = [&](const std::vector<double>& pt, const std::vector<double>& v) {
        for (std::size_t j = 1; j < v.size(); ++j)
            if (!(v[j] <= 0)) return;
        if (!std::isfinite(v[0])) return;
        if (!res.feasible || v[0] < res.value) {
            res.x = pt;
            res.value = v[0];
            res.feasible = true;
        }
    };

    std::vector<int> free;
    for (std::size_t c = 0; c < x.size(); ++c)
        if (s.allowed(c) && x[c] > opt.face_threshold) free.push_back(static_cast<int>(c));
    prog.values(x, val);
    consider(x, val);
    MatrixXd z = face_basis(s, free);
    if (z.cols() == 0) {
        if (!res.feasible) res.x = std::move(x);
        return res;
    }

    auto merit_of = [&](const std::vector<double>& v, double mu) {
        double m = v[0];
        for (std::size_t j = 1; j < v.size(); ++j) m += mu * std::max(0.0, v[j] + opt.margin);
        return m;
    };

    std::vector<double> lambda(ncons, 0.0);
    std::vector<VectorXd> grads;
    std::vector<double> trial(x.size()), tval;
    double mu = 1.0;
    for (int it = 0; it < opt.max_iterations; ++it) {
        res.iterations = it + 1;
        prog.values(x, val);
        prog.gradients(free, grads);
        VectorXd g = z.transpose() * grads[0];
        MatrixXd a(static_cast<Eigen::Index>(ncons), z.cols());
        VectorXd b(static_cast<Eigen::Index>(ncons));
        for (std::size_t j = 0; j < ncons; ++j) {
            a.row(static_cast<Eigen::Index>(j)) = (z.transpose() * grads[j + 1]).transpose();
            b(static_cast<Eigen::Index>(j)) = -opt.margin - val[j + 1];
        }

        std::vector<double> w = prog.coef(0);
        for (std::size_t j = 0; j < ncons; ++j)
            for (std::size_t h = 0; h < w.size(); ++h) w[h] += lambda[j] * prog.coef(j + 1)[h];
        // Cholesky of the reduced Hessian, shifted until positive definite
        MatrixXd hess = prog.reduced_hessian(w, free, z);
        double top = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        Eigen::LLT<MatrixXd> llt(hess);
        for (double shift = 1e-8 * top; llt.info() != Eigen::Success; shift *= 10) {
            MatrixXd shifted = hess;
            shifted.diagonal().array() += shift;
            llt.compute(shifted);
        }

        VectorXd l = VectorXd::Zero(static_cast<Eigen::Index>(ncons));
        VectorXd bg = llt.solve(g);
        if (ncons > 0) {
            MatrixXd ba = llt.solve(a.transpose());
            MatrixXd m = a * ba;
            VectorXd v = a * bg + b;
            l = nonneg_qp(0.5 * (m + m.transpose()), v);
            bg += ba * l;
        }
        VectorXd p = -bg;
        VectorXd step = z * p;
        if (step.cwiseAbs().maxCoeff() < 1e-15) break;
        for (std::size_t j = 0; j < ncons; ++j) lambda[j] = l(static_cast<Eigen::Index>(j));
        mu = std::max(mu, 2.0 * (l.size() ? l.maxCoeff() : 0.0) + 1.0);

        double amax = 1.0;
        for (std::size_t i = 0; i < free.size(); ++i) {
            double d = step(static_cast<Eigen::Index>(i));
            if (d < 0) amax = std::min(amax, 0.9 * x[static_cast<std::size_t>(free[i])] / -d);
        }
        double cur = merit_of(val, mu);
        bool moved = false;
        for (double alpha = amax; alpha > 1e-12 && !moved; alpha *= 0.5) {
            trial = x;
            for (std::size_t i = 0; i < free.size(); ++i)
                trial[static_cast<std::size_t>(free[i])] += alpha * step(static_cast<Eigen::Index>(i));
            prog.values(trial, tval);
            if (merit_of(tval, mu) < cur) {
                moved = true;
                break;
            }
            if (alpha == amax && ncons > 0) {
                // second-order correction toward the linearized active constraints
                std::vector<Eigen::Index> act;
                for (std::size_t j = 0; j < ncons; ++j)
                    if (l(static_cast<Eigen::Index>(j)) > 0 || tval[j + 1] + opt.margin > 0)
                        act.push_back(static_cast<Eigen::Index>(j));
                if (act.empty()) continue;
                MatrixXd aw(static_cast<Eigen::Index>(act.size()), z.cols());
                VectorXd cw(static_cast<Eigen::Index>(act.size()));
                for (std::size_t k = 0; k < act.size(); ++k) {
                    aw.row(static_cast<Eigen::Index>(k)) = a.row(act[k]);
                    cw(static_cast<Eigen::Index>(k)) = tval[static_cast<std::size_t>(act[k]) + 1] + opt.margin;
                }
                VectorXd r = -aw.transpose() * (aw * aw.transpose()).completeOrthogonalDecomposition().solve(cw);
                VectorXd corr = z * (alpha * p + r);
                std::vector<double> t2 = x;
                bool ok = true;
                for (std::size_t i = 0; i < free.size(); ++i) {
                    auto c = static_cast<std::size_t>(free[i]);
                    t2[c] += corr(static_cast<Eigen::Index>(i));
                    if (!(t2[c] > 0)) ok = false;
                }
                if (!ok) continue;
                std::vector<double> v2;
                prog.values(t2, v2);
                if (merit_of(v2, mu) < cur) {
                    trial.swap(t2);
                    tval.swap(v2);
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) break;
        x.swap(trial);
        val.swap(tval);
        consider(x, val);
        // cells that reached the boundary leave the face
        std::size_t kept = 0;
        for (int c : free)
            if (x[static_cast<std::size_t>(c)] > opt.face_threshold) free[kept++] = c;
        if (kept < free.size()) {
            free.resize(kept);
            z = face_basis(s, free);
            if (z.cols() == 0) break;
        }
    }
    if (!res.feasible) {
        res.x = std::move(x);
        res.value = val[0];
    }
    return res;
}

}  // namespace relexp::opt
