#include <cmath>

#include "doctest.h"
#include "relexp/core/info.hpp"
#include "relexp/decoding/decoder.hpp"

using namespace relexp;

TEST_CASE("tie window") {
    CHECK(alpha_leq(1.0, 1.0));
    CHECK(alpha_leq(1.0 + 1e-14, 1.0));
    CHECK_FALSE(alpha_leq(1.0 + 1e-9, 1.0));
    CHECK(alpha_leq(kInf, kInf));
    CHECK(alpha_leq(3.0, kInf));
    CHECK_FALSE(alpha_leq(kInf, 3.0));
}

TEST_CASE("metric names round-trip") {
    for (Metric m : {Metric::ml, Metric::min_entropy, Metric::min_equivocation})
        CHECK(parse_metric(metric_name(m)) == m);
    CHECK(parse_metric("me") == Metric::min_entropy);
    CHECK_THROWS_AS(parse_metric("bogus"), InputError);
}

TEST_CASE("ML metric is the per-letter negative log-likelihood") {
    Joint w({2, 2}, {0.9, 0.1, 0.2, 0.8});
    Joint v({2, 2}, {0.25, 0.25, 0.125, 0.375});
    double expect = -(0.25 * std::log2(0.9) + 0.25 * std::log2(0.1) + 0.125 * std::log2(0.2) + 0.375 * std::log2(0.8));
    CHECK(alpha_p2p(Metric::ml, v, w) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(alpha_p2p(Metric::min_entropy, v, w) == doctest::Approx(cond_entropy(v, {1}, {0})).epsilon(1e-14));
    Joint w0({2, 2}, {1.0, 0.0, 0.0, 1.0});
    CHECK(alpha_p2p(Metric::ml, v, w0) == kInf);
}

TEST_CASE("memoized tables return the direct value") {
    Joint w({2, 3}, {0.7, 0.2, 0.1, 0.1, 0.3, 0.6});
    P2PMetricTable t(Metric::ml, w);
    std::vector<int> c{2, 1, 0, 0, 1, 2};
    double direct = alpha_p2p(Metric::ml, Joint({2, 3}, {2 / 6.0, 1 / 6.0, 0, 0, 1 / 6.0, 2 / 6.0}), w);
    CHECK(t(c) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(t(c) == t(c));
}

TEST_CASE("decoder picks the unique minimizer and reports ties") {
    Joint w({2, 2}, {0.9, 0.1, 0.1, 0.9});
    std::vector<Sequence> code{{0, 0, 0, 0}, {1, 1, 1, 1}, {0, 0, 1, 1}};
    CHECK(decode_p2p(code, Sequence{1, 0, 0, 0}, Metric::ml, w).index == 0);
    CHECK(decode_p2p(code, Sequence{1, 1, 1, 1}, Metric::ml, w).index == 1);
    // distance 1 from words 0 and 2
    CHECK(decode_p2p(code, Sequence{0, 0, 1, 0}, Metric::ml, w).index == -1);
}

TEST_CASE("two-user decoder uses the min-equivocation metric") {
    Sequence u{0, 0, 0, 0};
    std::vector<Sequence> cx{{0, 0, 1, 1}, {0, 1, 0, 1}}, cy{{0, 0, 0, 0}, {0, 1, 1, 0}};
    MacMetricTable t(1, 2, 2, 2);
    // z equals the first x-word: only the pair (0, 0) determines (x, y) from z
    Sequence z{0, 0, 1, 1};
    MacDecodeResult r = decode_mac(u, cx, cy, z, t, {1, 2, 2, 2});
    CHECK(r.ix == 0);
    CHECK(r.iy == 0);
    CHECK(r.value == doctest::Approx(0.0));
    // a repeated x-word ties with itself
    std::vector<Sequence> twice{{0, 0, 1, 1}, {0, 0, 1, 1}};
    CHECK(decode_mac(u, twice, cy, z, t, {1, 2, 2, 2}).ix == -1);
}
