#include "relexp/decoding/decoder.hpp"

namespace relexp {

DecodeResult decode_p2p(const std::vector<Sequence>& code, const Sequence& y, P2PMetricTable& metric, int nx, int ny) {
    DecodeResult best;
    bool tied = false;
    std::vector<int> dims{nx, ny};
    for (std::size_t i = 0; i < code.size(); ++i) {
        double a = metric(joint_counts({&code[i], &y}, dims));
        if (i == 0) {
            best = {0, a};
        } else if (alpha_leq(a, best.value) && alpha_leq(best.value, a)) {
            tied = true;
        } else if (a < best.value) {
            best = {static_cast<int>(i), a};
            tied = false;
        }
    }
    if (tied) best.index = -1;
    return best;
}

DecodeResult decode_p2p(const std::vector<Sequence>& code, const Sequence& y, Metric m, const Joint& w) {
    P2PMetricTable table(m, w);
    return decode_p2p(code, y, table, w.dim(0), w.dim(1));
}

MacDecodeResult decode_mac(const Sequence& u, const std::vector<Sequence>& cx, const std::vector<Sequence>& cy,
                           const Sequence& z, MacMetricTable& metric, const std::vector<int>& dims) {
    MacDecodeResult best;
    bool tied = false;
    bool any = false;
    for (std::size_t i = 0; i < cx.size(); ++i) {
        for (std::size_t j = 0; j < cy.size(); ++j) {
            double a = metric(joint_counts({&u, &cx[i], &cy[j], &z}, dims));
            if (!any) {
                any = true;
                best = {static_cast<int>(i), static_cast<int>(j), a};
                continue;
            }
            if (alpha_leq(a, best.value) && alpha_leq(best.value, a)) {
                tied = true;
            } else if (a < best.value) {
                best = {static_cast<int>(i), static_cast<int>(j), a};
                tied = false;
            }
        }
    }
    if (tied) best.ix = best.iy = -1;
    return best;
}

}  // namespace relexp
