#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "relexp/ensemble/empirical.hpp"
#include "relexp/ensemble/error_prob.hpp"
#include "relexp/ensemble/expurgate.hpp"
#include "relexp/ensemble/packing.hpp"
#include "relexp/ensemble/sandwich.hpp"
#include "relexp/ensemble/verify.hpp"
#include "unit/oracles.hpp"

using namespace relexp;
using namespace relexp::ensemble;

namespace {

Joint bsc(double p) { return Joint({2, 2}, {1 - p, p, p, 1 - p}); }
std::vector<double> bsc_rows(double p) { return {1 - p, p, p, 1 - p}; }

std::vector<std::vector<int>> words(const P2PCode& c) {
    std::vector<std::vector<int>> out;
    for (const auto& w : c.words) out.emplace_back(w.begin(), w.end());
    return out;
}

// I(X;X~) of the joint type of two binary words, via the oracle
double pair_information(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> k = oracle::counts({&a, &b}, {2, 2});
    oracle::Table t{{2, 2}, {}};
    for (int v : k) t.m.push_back(static_cast<double>(v) / static_cast<double>(a.size()));
    return oracle::mutual_info(t, {0}, {1});
}

}  // namespace

TEST_CASE("pair and triple tallies count every ordered tuple") {
    Rng rng(1);
    P2PCode c = sample_p2p_code({3, 3}, 7, rng);
    std::int64_t pairs = 0, triples = 0;
    for (const auto& [t, k] : pair_tally(c)) pairs += k;
    for (const auto& [t, k] : triple_tally(c)) triples += k;
    CHECK(pairs == 7 * 6);
    CHECK(triples == 7 * 6 * 5);

    // tally against direct counting
    auto ws = words(c);
    TypeTally brute;
    for (std::size_t i = 0; i < ws.size(); ++i)
        for (std::size_t j = 0; j < ws.size(); ++j)
            if (i != j) ++brute[oracle::counts({&ws[i], &ws[j]}, {2, 2})];
    CHECK(brute == pair_tally(c));

    // sum over V of pi(C, V) = M - 1
    double total = 0;
    for (const auto& [t, k] : pair_tally(c)) {
        Rational r = packing_pi(c, t);
        CHECK(r.num * 7 == k * r.den);
        total += r.value();
    }
    CHECK(total == doctest::Approx(6.0));
}

TEST_CASE("two-user tallies sum to the number of index tuples") {
    Rng rng(2);
    MacCode c = sample_mac_code(2, 2, 2, {2, 1, 1, 2}, {1, 2, 2, 1}, 3, 4, rng);
    check_code(c);
    auto total = [&](Which w) {
        std::int64_t s = 0;
        for (const auto& [t, k] : first_order_tally(c, w)) s += k;
        return s;
    };
    CHECK(total(Which::U) == 12);
    CHECK(total(Which::X) == 12 * 2);
    CHECK(total(Which::Y) == 12 * 3);
    CHECK(total(Which::XY) == 12 * 2 * 3);
    std::int64_t lam = 0;
    for (const auto& [t, k] : second_order_tally(c, Which::X)) lam += k;
    CHECK(lam == 12 * 2 * 1);
}

TEST_CASE("error probability of a two-word code in closed form") {
    // x = 01 and 10: outputs 00 and 11 tie and 10 loses, so Pe = 2p(1-p) + p^2
    P2PCode c{2, 2, {1, 1}, {{0, 1}, {1, 0}}};
    for (double p : {0.05, 0.1, 0.3}) CHECK(exact_error(c, bsc(p), Metric::ml) == doctest::Approx(2 * p * (1 - p) + p * p));
}

TEST_CASE("exhaustive error agrees with the oracle decoder") {
    Joint w({2, 3}, {0.7, 0.2, 0.1, 0.1, 0.3, 0.6});
    std::vector<double> rows(w.mass().begin(), w.mass().end());
    for (int s = 0; s < 6; ++s) {
        Rng rng(ensemble::split_rng(30, static_cast<std::uint64_t>(s)));
        P2PCode c = sample_p2p_code({3, 3}, 3 + s % 3, rng);
        CHECK(exact_error(c, w, Metric::ml) == doctest::Approx(oracle::exact_error(words(c), rows, 2, 3, 0)).epsilon(1e-12));
        CHECK(exact_error(c, w, Metric::min_entropy) ==
              doctest::Approx(oracle::exact_error(words(c), rows, 2, 3, 1)).epsilon(1e-12));
    }
}

TEST_CASE("sandwich terms reproduce the union bound and the pair overlap") {
    for (int s = 0; s < 4; ++s) {
        Rng rng = split_rng(40, static_cast<std::uint64_t>(s));
        P2PCode c = sample_p2p_code({3, 3}, 4, rng);
        for (Metric m : {Metric::ml, Metric::min_entropy}) {
            int mo = m == Metric::ml ? 0 : 1;
            SandwichReport r = sandwich_p2p(c, bsc(0.1), m, 0.1);
            double sb = 0, sc = 0;
            for (const SandwichTerm& t : r.terms) {
                sb += t.weight * t.b;
                sc += t.weight * t.c;
            }
            CHECK(sb == doctest::Approx(oracle::union_bound(words(c), bsc_rows(0.1), 2, 2, mo)).epsilon(1e-9));
            CHECK(sc == doctest::Approx(oracle::pair_overlap(words(c), bsc_rows(0.1), 2, 2, mo)).epsilon(1e-9));
            CHECK(r.exact == doctest::Approx(oracle::exact_error(words(c), bsc_rows(0.1), 2, 2, mo)).epsilon(1e-12));
            CHECK(r.lower <= r.exact * (1 + 1e-9) + 1e-300);
            CHECK(r.exact <= r.upper * (1 + 1e-9) + 1e-300);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("Monte Carlo error estimates bracket the exact value") {
    Rng rng(5);
    P2PCode c = sample_p2p_code({4, 4}, 6, rng);
    double exact = exact_error(c, bsc(0.1), Metric::ml);
    const std::int64_t trials = 40000;
    Estimate e = monte_carlo_error(c, bsc(0.1), Metric::ml, trials, rng);
    double sigma = std::sqrt(exact * (1 - exact) / trials);
    CHECK(std::abs(e.value - exact) <= 5 * sigma);
    CHECK(e.lo <= e.value);
    CHECK(e.value <= e.hi);

    MacCode mc = sample_mac_code(1, 2, 2, {3, 3}, {3, 3}, 2, 2, rng);
    Joint wm({2, 2, 2}, {0.9, 0.1, 0.2, 0.8, 0.3, 0.7, 0.6, 0.4});
    double mexact = exact_error(mc, wm);
    Estimate me = monte_carlo_error(mc, wm, trials, rng);
    CHECK(std::abs(me.value - mexact) <= 5 * std::sqrt(mexact * (1 - mexact) / trials) + 1e-12);
}

TEST_CASE("Wilson interval of a known count") {
    Estimate e = wilson(10, 100);
    CHECK(e.value == doctest::Approx(0.1));
    CHECK(e.lo == doctest::Approx(0.0552).epsilon(1e-3));
    CHECK(e.hi == doctest::Approx(0.1744).epsilon(1e-3));
}

TEST_CASE("expurgation scores match a direct sum and remove planted duplicates") {
    Rng rng(6);
    P2PCode c = sample_p2p_code({8, 8}, 16, rng);
    c.words[1] = c.words[0];
    c.words[2] = c.words[0];
    const double rate = 0.25, delta = 0.1;
    auto ws = words(c);
    std::vector<double> scores = p2p_scores(c, rate, delta);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        double s = 0;
        for (std::size_t j = 0; j < ws.size(); ++j)
            if (j != i) s += std::exp2(-16 * (rate - pair_information(ws[i], ws[j]) + 3 * delta));
        CHECK(scores[i] == doctest::Approx(s).epsilon(1e-9));
    }
    P2PExpurgation ex = expurgate_p2p(c, rate, delta);
    for (int k : ex.kept) CHECK(k > 2);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool kept = std::find(ex.kept.begin(), ex.kept.end(), static_cast<int>(i)) != ex.kept.end();
        CHECK(kept == (scores[i] < 1));
    }
    CHECK(ex.code.size() == static_cast<int>(ex.kept.size()));
}

TEST_CASE("two-user expurgation keeps exactly the low scores") {
    Rng rng(7);
    MacCode c = sample_mac_code(2, 2, 2, {3, 3, 2, 4}, {4, 2, 3, 3}, 4, 4, rng);
    MacExpurgation ex = expurgate_mac(c, 2.0 / 12, 2.0 / 12, 0.3);
    CHECK(static_cast<int>(ex.g.size()) == c.mx());
    CHECK(static_cast<int>(ex.h.size()) == c.my());
    for (int i = 0; i < c.mx(); ++i) {
        bool kept = std::find(ex.kept_x.begin(), ex.kept_x.end(), i) != ex.kept_x.end();
        CHECK(kept == (ex.g[static_cast<std::size_t>(i)] < 1));
    }
    for (int j = 0; j < c.my(); ++j) {
        bool kept = std::find(ex.kept_y.begin(), ex.kept_y.end(), j) != ex.kept_y.end();
        CHECK(kept == (ex.h[static_cast<std::size_t>(j)] < 1));
    }
    CHECK(ex.code.mx() == static_cast<int>(ex.kept_x.size()));
    CHECK(ex.code.my() == static_cast<int>(ex.kept_y.size()));
}

TEST_CASE("least-squares fit of an exact line") {
    auto [slope, icept] = linear_fit({8, 12, 16, 20}, {2.0, 3.0, 4.0, 5.0});
    CHECK(slope == doctest::Approx(0.25));
    CHECK(std::abs(icept) <= 1e-12);
}

TEST_CASE("ensemble reports do not depend on the worker count") {
    P2PEnsemble e{{6, 2}, 4, 0.25, 0.1, 60, 11};
    setenv("RELEXP_WORKERS", "1", 1);
    BandReport a = packing_p2p_bands(e);
    setenv("RELEXP_WORKERS", "3", 1);
    BandReport b = packing_p2p_bands(e);
    unsetenv("RELEXP_WORKERS");
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        CHECK(a.rows[k].type == b.rows[k].type);
        CHECK(a.rows[k].value == b.rows[k].value);
    }
}
