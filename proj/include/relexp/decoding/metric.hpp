#pragma once

// Type-based decoding metrics. A decoder picks the candidate whose joint type
// with the received word has the smallest metric value; ties are errors.

#include <string>
#include <unordered_map>
#include <vector>

#include "relexp/core/joint.hpp"

namespace relexp {

enum class Metric {
    ml,                // D(V||W|P) + H(V|P) = -sum V(x,y) log W(y|x)
    min_entropy,       // H(V|P)
    min_equivocation,  // H(XY | ZU) for the two-user channel
};

Metric parse_metric(const std::string& s);
std::string metric_name(Metric m);

// Relative window inside which two metric values count as equal.
inline constexpr double kTieWindow = 1e-12;

// a <= b up to the tie window; +inf <= +inf holds.
bool alpha_leq(double a, double b);

// Point-to-point metric of a joint distribution over (X, Y); w is W(y|x).
double alpha_p2p(Metric m, const Joint& v_xy, const Joint& w);
// Two-user min-equivocation metric of a joint over (U, X, Y, Z).
double alpha_mac(const Joint& v_uxyz);

// Metric value of an (x, y) joint count table, memoized by table contents so
// equal tables always give bit-identical values.
class P2PMetricTable {
public:
    P2PMetricTable(Metric m, const Joint& w);
    double operator()(const std::vector<int>& counts_xy);
    Metric metric() const { return metric_; }

private:
    Metric metric_;
    Joint w_;
    std::vector<double> logw_;
    std::unordered_map<std::string, double> memo_;
};

// Min-equivocation value of a (u, x, y, z) joint count table, memoized.
class MacMetricTable {
public:
    MacMetricTable(int nu, int nx, int ny, int nz);
    double operator()(const std::vector<int>& counts_uxyz);

private:
    std::vector<int> dims_;
    std::vector<int> uz_map_;
    std::unordered_map<std::string, double> memo_;
};

}  // namespace relexp
