#include <cmath>

#include "doctest.h"
#include "relexp/core/info.hpp"
#include "relexp/dmc/exponents.hpp"
#include "unit/oracles.hpp"

using namespace relexp;
using dmc::Family;

namespace {

Joint bsc(double p) { return Joint({2, 2}, {1 - p, p, p, 1 - p}); }
const Joint kUniform = Joint::uniform({2});

double h2(double x) { return -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

oracle::Table table(const Joint& j) { return {j.dims(), std::vector<double>(j.mass().begin(), j.mass().end())}; }

}  // namespace

TEST_CASE("family names round-trip") {
    CHECK(dmc::all_families().size() == 5);
    for (Family f : dmc::all_families()) CHECK(dmc::parse_family(dmc::family_name(f)) == f);
    CHECK_THROWS_AS(dmc::parse_family("x"), InputError);
}

TEST_CASE("random-coding family matches Gallager's exponent on binary symmetric channels") {
    for (double p : {0.05, 0.1, 0.2})
        for (double rate : {0.02, 0.1, 0.2, 0.3, 0.4}) {
            double expect = oracle::gallager_er_bsc(p, rate);
            dmc::Result r = dmc::compute_exponent(bsc(p), kUniform, Metric::ml, rate, Family::r, {});
            CAPTURE(p);
            CAPTURE(rate);
            CHECK(std::abs(r.value - expect) <= 2e-6);
        }
}

TEST_CASE("solver agrees with the lattice oracle") {
    for (double rate : {0.05, 0.3}) {
        for (bool ex : {false, true}) {
            double o = oracle::lattice_exponent_bsc(0.1, rate, ex, 40);
            dmc::Result r =
                dmc::compute_exponent(bsc(0.1), kUniform, Metric::ml, rate, ex ? Family::ex : Family::r, {});
            CHECK(std::abs(r.value - o) <= 5e-3);
            // the oracle only reaches feasible points, so it cannot beat a correct minimum
            CHECK(r.value <= o + 1e-6);
        }
    }
}

TEST_CASE("family values are ordered by set nesting") {
    Joint w({2, 3}, {0.7, 0.2, 0.1, 0.15, 0.25, 0.6});
    Joint p({2}, {0.4, 0.6});
    for (Metric m : {Metric::ml, Metric::min_entropy})
        for (double rate : {0.01, 0.05, 0.15}) {
            auto res = dmc::compute_exponents(w, p, m, rate, dmc::all_families(), {});
            double r = res[0].value, rl = res[1].value, t = res[2].value, tl = res[3].value, ex = res[4].value;
            CHECK(ex >= t - 1e-9);
            CHECK(t >= r - 1e-9);
            CHECK(rl >= r - 1e-9);
            CHECK(tl >= t - 1e-9);
        }
}

TEST_CASE("argmins are members of their sets and reproduce the value") {
    Joint w = bsc(0.05);
    for (double rate : {0.03, 0.2})
        for (Family f : dmc::all_families()) {
            dmc::Result r = dmc::compute_exponent(w, kUniform, Metric::ml, rate, f, {});
            REQUIRE(r.feasible);
            std::vector<std::string> why;
            CHECK(dmc::membership(f, r.argmin, kUniform, rate, w, Metric::ml, 1e-6, &why));
            CHECK(why.empty());
            CHECK(dmc::objective(f, r.argmin, rate, w, Metric::ml) == doctest::Approx(r.value).epsilon(1e-9));

            // recompute the functionals with the oracle
            oracle::Table v = table(r.argmin);
            CHECK(r.argmin.marginal({0}).max_abs_diff(kUniform) < 1e-7);
            CHECK(r.argmin.marginal({1}).max_abs_diff(kUniform) < 1e-7);
            CHECK(r.at_argmin.i_cand == doctest::Approx(oracle::mutual_info(v, {1}, {0, 2})).epsilon(1e-9));
            CHECK(r.at_argmin.i_pair == doctest::Approx(oracle::mutual_info(v, {0}, {1})).epsilon(1e-9));
            oracle::Table vxy = v.marginal({0, 2});
            std::vector<double> pw{0.5 * 0.95, 0.5 * 0.05, 0.5 * 0.05, 0.5 * 0.95};
            CHECK(r.at_argmin.divergence == doctest::Approx(oracle::divergence(vxy.m, pw)).epsilon(1e-9));
        }
}

TEST_CASE("exponents vanish above capacity") {
    for (Family f : {Family::r, Family::T, Family::ex}) {
        dmc::Result r = dmc::compute_exponent(bsc(0.05), kUniform, Metric::ml, 0.9, f, {});
        CHECK(std::abs(r.value) <= 1e-9);
    }
}

TEST_CASE("typical and random-coding values coincide when the pair cap is slack") {
    for (double rate : {0.15, 0.25, 0.4}) {
        auto res = dmc::compute_exponents(bsc(0.05), kUniform, Metric::ml, rate, {Family::r, Family::T}, {});
        if (res[0].at_argmin.i_pair <= 2 * rate) CHECK(std::abs(res[1].value - res[0].value) <= 1e-6);
    }
}

TEST_CASE("minimum-entropy decoding reaches the maximum-likelihood random-coding value") {
    for (double rate : {0.05, 0.25}) {
        double ml = dmc::compute_exponent(bsc(0.1), kUniform, Metric::ml, rate, Family::r, {}).value;
        double me = dmc::compute_exponent(bsc(0.1), kUniform, Metric::min_entropy, rate, Family::r, {}).value;
        CHECK(std::abs(me - ml) <= 1e-5);
    }
}

TEST_CASE("critical rate of a binary symmetric channel") {
    double p = 0.05;
    double g = std::sqrt(p) / (std::sqrt(p) + std::sqrt(1 - p));
    double expect = 1 - h2(g);
    dmc::CriticalRate cr = dmc::critical_rate(bsc(p), kUniform, Metric::ml, {}, 1e-3);
    CHECK(std::abs(cr.rate - expect) <= 3e-3);
}

TEST_CASE("optimal composition of a symmetric channel is uniform") {
    dmc::CompositionResult c = dmc::maximize_over_composition(bsc(0.1), Metric::ml, 0.2, Family::r, {}, 20);
    CHECK(std::abs(c.p[0] - 0.5) <= 0.05);
    CHECK(std::abs(c.value - oracle::gallager_er_bsc(0.1, 0.2)) <= 1e-5);
}

TEST_CASE("active constraints name what binds") {
    dmc::Result r = dmc::compute_exponent(bsc(0.05), kUniform, Metric::ml, 0.05, Family::ex, {});
    auto act = dmc::active_constraints(Family::ex, r.at_argmin, 0.05);
    CHECK(std::find(act.begin(), act.end(), "pair-cap-R") != act.end());
}
