#include <cmath>
#include <random>

#include "doctest.h"
#include "relexp/mac/exponents.hpp"
#include "unit/oracles.hpp"

using namespace relexp;
using mac::Branch;
using mac::Family;

namespace {

Joint to_joint(const oracle::Table& t) { return Joint(t.dims, t.m); }
oracle::Table to_table(const Joint& j) { return {j.dims(), std::vector<double>(j.mass().begin(), j.mass().end())}; }

// W(z|x,y) over (X, Y, Z), not symmetric in the users
Joint channel() { return Joint({2, 2, 2}, {0.9, 0.1, 0.3, 0.7, 0.05, 0.95, 0.6, 0.4}); }

Joint input() { return Joint({2, 2, 2}, {0.12, 0.18, 0.08, 0.12, 0.1, 0.1, 0.15, 0.15}); }

mac::Input make(double rx, double ry) { return {input(), channel(), rx, ry, Metric::min_equivocation}; }

}  // namespace

TEST_CASE("inputs without the Markov chain are rejected") {
    mac::Input ok = make(0.05, 0.05);
    CHECK_NOTHROW(mac::validate(ok));
    mac::Input bad = ok;
    bad.p = Joint({1, 2, 2}, {0.4, 0.1, 0.1, 0.4});
    CHECK_THROWS_AS(mac::validate(bad), InputError);
    mac::Input bad_w = ok;
    bad_w.w = Joint({2, 2, 2}, {0.9, 0.2, 0.3, 0.7, 0.05, 0.95, 0.6, 0.4});
    CHECK_THROWS_AS(mac::validate(bad_w), InputError);
}

TEST_CASE("F and second-order functions agree with oracle information sums") {
    std::mt19937_64 rng(77);
    for (int it = 0; it < 50; ++it) {
        double rx = 0.1, ry = 0.2;
        // (U, X, Y, X~, Y~, Z)
        oracle::Table t = oracle::random_table({2, 2, 2, 2, 2, 2}, rng, it % 3 == 0 ? 0.3 : 0.0);
        mac::Roles r{0, 1, 2, 3, 4, -1, -1, 5};
        mac::FValues f = mac::f_functions(to_joint(t), r, rx, ry);
        double ixy = oracle::mutual_info(t, {1}, {2}, {0});
        CHECK(f.fu == doctest::Approx(ixy).epsilon(1e-12));
        CHECK(f.fx == doctest::Approx(ixy + oracle::mutual_info(t, {3}, {1, 2}, {0}) - rx).epsilon(1e-12));
        CHECK(f.fy == doctest::Approx(ixy + oracle::mutual_info(t, {4}, {1, 2}, {0}) - ry).epsilon(1e-12));
        double fxy = ixy + oracle::mutual_info(t, {3}, {4}, {0}) + oracle::mutual_info(t, {3, 4}, {1, 2}, {0}) - rx - ry;
        CHECK(f.fxy == doctest::Approx(fxy).epsilon(1e-12));
        CHECK(mac::alpha_equivocation(to_joint(t), r) ==
              doctest::Approx(oracle::cond_entropy(t, {1, 2}, {5, 0})).epsilon(1e-12));

        // (U, X, Y, X~, X^, Z)
        mac::Roles rs{0, 1, 2, 3, -1, 4, -1, 5};
        double es = oracle::mutual_info(t, {4}, {1, 2, 3}, {0}) + oracle::mutual_info(t, {3}, {1, 2}, {0}) + ixy - 2 * rx;
        CHECK(mac::es_x(to_joint(t), rs, rx) == doctest::Approx(es).epsilon(1e-12));
    }
}

TEST_CASE("branch argmins are members and reproduce the family value") {
    mac::Input in = make(0.05, 0.08);
    auto res = mac::compute_exponents(in, dmc::all_families(), {});
    for (const mac::Result& r : res) {
        CAPTURE(dmc::family_name(r.family));
        bool linear = r.family == Family::rL || r.family == Family::TL;
        double best = kInf;
        for (const mac::BranchResult& b : r.branches) {
            if (!b.feasible) continue;
            std::vector<std::string> why;
            CHECK(mac::membership(r.family, b.branch, b.argmin, in, 1e-6, &why));
            CHECK(mac::objective(b.branch, b.argmin, in, linear) == doctest::Approx(b.value).epsilon(1e-9));
            best = std::min(best, b.value);
        }
        CHECK(r.value == doctest::Approx(best));
    }
    CHECK(res[4].value >= res[2].value - 1e-9);  // ex >= T
    CHECK(res[2].value >= res[0].value - 1e-9);  // T >= r
    CHECK(res[1].value >= res[0].value - 1e-9);  // rL >= r
    CHECK(res[3].value >= res[2].value - 1e-9);  // TL >= T
}

TEST_CASE("branch objective equals the oracle sum at the argmin") {
    mac::Input in = make(0.05, 0.08);
    mac::Result r = mac::compute_exponent(in, Family::r, {});
    const mac::BranchResult& b = r.branches[0];  // X branch, axes (U, X, Y, X~, Z)
    REQUIRE(b.feasible);
    oracle::Table v = to_table(b.argmin);
    // D(V_{Z|UXY} || W | V_{UXY})
    oracle::Table uxyz = v.marginal({0, 1, 2, 4}), uxy = v.marginal({0, 1, 2});
    std::vector<double> ref(uxyz.m.size());
    Joint w = channel();
    for (int u = 0; u < 2; ++u)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z)
                    ref[static_cast<std::size_t>(((u * 2 + x) * 2 + y) * 2 + z)] =
                        uxy.m[static_cast<std::size_t>((u * 2 + x) * 2 + y)] * w.at({x, y, z});
    double d = oracle::divergence(uxyz.m, ref);
    double excess = oracle::mutual_info(v, {3}, {1, 2, 4}, {0}) - in.rx;
    double expect = d + oracle::mutual_info(v, {1}, {2}, {0}) + std::max(0.0, excess);
    CHECK(b.value == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("exchanging the users exchanges the X and Y branches") {
    mac::Input in = make(0.04, 0.09);
    mac::Input sw{in.p.permuted({0, 2, 1}), in.w.permuted({1, 0, 2}), in.ry, in.rx, in.metric};
    mac::Result a = mac::compute_exponent(in, Family::T, {});
    mac::Result b = mac::compute_exponent(sw, Family::T, {});
    CHECK(std::abs(a.value - b.value) <= 2e-4);
    CHECK(std::abs(a.branches[0].value - b.branches[1].value) <= 2e-4);
    CHECK(std::abs(a.branches[1].value - b.branches[0].value) <= 2e-4);
    CHECK(std::abs(a.branches[2].value - b.branches[2].value) <= 2e-4);
}

TEST_CASE("families are no smaller than the reference exponent") {
    for (double rate : {0.01, 0.06}) {
        mac::Comparison c = mac::compare_with_reference(make(rate, rate), {}, 1e-4);
        CAPTURE(rate);
        CHECK(c.ordered);
        CHECK(c.gap_r >= -1e-4);
        CHECK(c.pass);
    }
}

TEST_CASE("sampled input distributions satisfy the Markov chain") {
    Rng rng(12);
    for (int k = 0; k < 20; ++k) {
        Joint p = mac::sample_input_distribution(3, 2, 3, rng);
        CHECK(p.dims() == std::vector<int>{3, 2, 3});
        mac::Input in{p, Joint({2, 3, 2}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}), 0.1, 0.1,
                      Metric::min_equivocation};
        CHECK_NOTHROW(mac::validate(in));
        CHECK(oracle::mutual_info(to_table(p), {1}, {2}, {0}) < 1e-12);
    }
}
