#pragma once

// Monte Carlo checks of ensemble packing statistics against exponential bands.

#include <cstdint>
#include <string>
#include <vector>

#include "relexp/ensemble/packing.hpp"

namespace relexp::ensemble {

struct BandRow {
    std::string quantity;   // e.g. "pi", "lambda", "N_X"
    std::vector<int> type;  // joint type counts
    double value = 0;       // sample mean
    double bound = 0;
    bool upper = true;      // value <= bound, else value >= bound
    bool pass = false;
    double margin = 0;      // log2 distance to the bound, positive inside
};

struct BandReport {
    std::vector<BandRow> rows;
    int samples = 0;
    int violations = 0;
    bool pass() const { return violations == 0; }
};

struct P2PEnsemble {
    std::vector<int> composition;
    int m = 1;
    double rate = 0;
    double delta = 0.1;
    int samples = 500;
    std::uint64_t seed = 1;
};

// Sample mean of pi against [2^{n(R - I(X;X~) - delta)}, 2^{n(R - I(X;X~) + delta)}]
// for every pair type with both marginals equal to the composition, and the
// sample mean of lambda against 2^{n[2R - I(X;X~) - I(X^;XX~) + 4 delta]} for every
// triple type that occurs (types that never occur have mean 0).
BandReport packing_p2p_bands(const P2PEnsemble& e);

// Fraction of sampled codes whose pi lies in the 2 delta band for every pair
// type and whose lambda stays below the 4 delta cap for every triple type.
struct TypicalityReport {
    int samples = 0;
    int typical = 0;
    double fraction() const { return samples ? static_cast<double>(typical) / samples : 0.0; }
};
TypicalityReport typicality_p2p(const P2PEnsemble& e);

struct MacEnsemble {
    int nu = 1, nx = 2, ny = 2;
    std::vector<int> counts_ux, counts_uy;
    int mx = 1, my = 1;
    double rx = 0, ry = 0;
    double delta = 0.1;
    int samples = 500;
    std::uint64_t seed = 1;
    double max_types = 2e6;  // enumeration cap per packing function
};

// Sample means of N_U, N_X, N_Y, N_XY against their two-sided bands
//   U: [2^{-n(F+d)}, 2^{-n(F-2d)}]   X, Y: [2^{-n(F+3d)}, 2^{-n(F-4d)}]   XY: [2^{-n(F+4d)}, 2^{-n(F-4d)}]
// over every admissible joint type, and of Lambda_X, Lambda_Y, Lambda_XY against
// 2^{-n(E_S - 4d)}, 2^{-n(E_S - 4d)}, 2^{-n(E_S - 6d)} over the types that occur.
// Throws CapabilityError when a type enumeration exceeds max_types.
BandReport packing_mac_bands(const MacEnsemble& e);

}  // namespace relexp::ensemble
