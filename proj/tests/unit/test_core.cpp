#include <atomic>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "relexp/core/info.hpp"
#include "relexp/core/parallel.hpp"
#include "relexp/core/types.hpp"
#include "relexp/ensemble/code.hpp"

using namespace relexp;

TEST_CASE("joint marginals, permutations and conditionals") {
    Joint j({2, 3}, {0.1, 0.2, 0.1, 0.3, 0.2, 0.1});
    Joint mx = j.marginal({0});
    CHECK(mx[0] == doctest::Approx(0.4));
    CHECK(mx[1] == doctest::Approx(0.6));
    Joint my = j.marginal({1});
    CHECK(my[0] == doctest::Approx(0.4));
    CHECK(my[2] == doctest::Approx(0.2));

    Joint t = j.permuted({1, 0});
    CHECK(t.dims() == std::vector<int>{3, 2});
    CHECK(t.at({2, 0}) == doctest::Approx(j.at({0, 2})));

    ConditionResult c = condition(j, {0}, {1});
    CHECK(c.empty_rows.empty());
    CHECK(c.cond.at({1, 0}) == doctest::Approx(0.5));
    Joint back = compose(mx, c.cond);
    CHECK(back.max_abs_diff(j) < 1e-15);
}

TEST_CASE("zero rows of a conditional become uniform and are reported") {
    Joint j({2, 2}, {0.5, 0.5, 0.0, 0.0});
    ConditionResult c = condition(j, {0}, {1});
    REQUIRE(c.empty_rows.size() == 1);
    CHECK(c.empty_rows[0] == 1);
    CHECK(c.cond.at({1, 0}) == doctest::Approx(0.5));
}

TEST_CASE("malformed tables are input errors") {
    CHECK_THROWS_AS(Joint({2, 2}, {0.5, 0.5}), InputError);
    Joint w({2, 2}, {0.9, 0.2, 0.1, 0.9});
    CHECK_THROWS_AS(check_conditional(w, 1, 1e-9, "w"), InputError);
    CHECK_NOTHROW(check_conditional(Joint({2, 2}, {0.9, 0.1, 0.1, 0.9}), 1, 1e-9, "w"));
}

TEST_CASE("projection map sends each cell to its marginal cell") {
    std::vector<int> dims{2, 3, 2};
    std::vector<int> map = projection_map(dims, {2, 0});
    Joint j = Joint::uniform(dims);
    std::vector<int> c(3);
    for (std::size_t flat = 0; flat < j.size(); ++flat) {
        j.coords(flat, c);
        CHECK(map[flat] == c[2] * 2 + c[0]);
    }
}

TEST_CASE("exact and rounded compositions") {
    CHECK(composition_counts(Joint({3}, {0.25, 0.25, 0.5}), 8) == std::vector<int>{2, 2, 4});
    CHECK_THROWS_AS(composition_counts(Joint({2}, {0.3, 0.7}), 4), InputError);
    std::vector<int> r = round_composition(Joint({3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}), 10);
    CHECK(r[0] + r[1] + r[2] == 10);
    for (int v : r) CHECK((v == 3 || v == 4));
}

TEST_CASE("random sequences hit their type class and are close to uniform on it") {
    Rng rng(3);
    std::vector<int> counts{2, 1, 1};
    std::map<Sequence, int> seen;
    const int draws = 12000;
    for (int k = 0; k < draws; ++k) {
        Sequence s = random_sequence(counts, rng);
        CHECK(joint_counts({&s}, {3}) == counts);
        ++seen[s];
    }
    // |T| = 4! / 2! = 12 sequences, each expected draws / 12 = 1000 times
    CHECK(seen.size() == 12);
    for (const auto& [s, k] : seen) CHECK(std::abs(k - 1000) < 150);
}

TEST_CASE("conditional sequences have the requested joint type with their base") {
    Rng rng(4);
    Sequence base{0, 0, 0, 1, 1, 1, 1};
    std::vector<int> cond{1, 2, 3, 1};  // rows: base symbol, columns: new symbol
    for (int k = 0; k < 50; ++k) {
        Sequence s = random_conditional_sequence(base, cond, 2, rng);
        CHECK(joint_counts({&base, &s}, {2, 2}) == cond);
    }
    CHECK_THROWS_AS(random_conditional_sequence(base, std::vector<int>{1, 1, 3, 1}, 2, rng), InputError);
}

TEST_CASE("infinite divergences are absorbing") {
    Joint p({2}, {0.5, 0.5}), q({2}, {1.0, 0.0});
    CHECK(divergence(p, q) == kInf);
    CHECK(add_inf(kInf, -5.0) == kInf);
    CHECK(divergence(q, p) == doctest::Approx(1.0));
}

TEST_CASE("parallel_for visits each index once and rethrows") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), [&](std::size_t k) { hits[k]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10,
                                 [](std::size_t k) {
                                     if (k == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("worker count follows the environment") {
    setenv("RELEXP_WORKERS", "3", 1);
    CHECK(worker_count() == 3);
    setenv("RELEXP_WORKERS", "junk", 1);
    CHECK(worker_count() >= 1);
    unsetenv("RELEXP_WORKERS");
}

TEST_CASE("split generators depend only on seed and index") {
    Rng a = ensemble::split_rng(9, 4), b = ensemble::split_rng(9, 4), c = ensemble::split_rng(9, 5);
    std::uint64_t va = a(), vb = b(), vc = c();
    CHECK(va == vb);
    CHECK(va != vc);
}
