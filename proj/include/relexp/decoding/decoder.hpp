#pragma once

#include <utility>
#include <vector>

#include "relexp/core/types.hpp"
#include "relexp/decoding/metric.hpp"

namespace relexp {

struct DecodeResult {
    int index = -1;      // unique minimizer, or -1 when the minimum is tied
    double value = kInf;  // smallest metric value
};

// Unique minimizer of the metric over codewords; a tie returns index -1.
DecodeResult decode_p2p(const std::vector<Sequence>& code, const Sequence& y, P2PMetricTable& metric, int nx, int ny);
DecodeResult decode_p2p(const std::vector<Sequence>& code, const Sequence& y, Metric m, const Joint& w);

struct MacDecodeResult {
    int ix = -1;
    int iy = -1;
    double value = kInf;
};

// Min-equivocation decoding over all codeword pairs; ties return (-1, -1).
MacDecodeResult decode_mac(const Sequence& u, const std::vector<Sequence>& cx, const std::vector<Sequence>& cy,
                           const Sequence& z, MacMetricTable& metric, const std::vector<int>& dims_uxyz);

}  // namespace relexp
