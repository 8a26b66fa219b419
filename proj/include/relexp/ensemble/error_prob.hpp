#pragma once

// Average error probability of a code under an alpha-decoder, where ties
// with the transmitted word count as errors.

#include <cstdint>

#include "relexp/decoding/metric.hpp"
#include "relexp/ensemble/code.hpp"

namespace relexp::ensemble {

struct ErrorOptions {
    // largest number of channel outputs the exhaustive path will enumerate
    double max_outputs = 1 << 22;
};

// Exhaustive: sum over every output sequence. Throws CapabilityError when
// |output alphabet|^n exceeds the cap. w is W(y|x).
double exact_error(const P2PCode& c, const Joint& w, Metric m, const ErrorOptions& opt = {});
// Two-user version with the min-equivocation decoder; w is W(z|x,y).
double exact_error(const MacCode& c, const Joint& w, const ErrorOptions& opt = {});

struct Estimate {
    double value = 0;
    double lo = 0, hi = 0;  // Wilson 95% interval
    std::int64_t errors = 0;
    std::int64_t trials = 0;
};

// Wilson score interval for k successes in n trials.
Estimate wilson(std::int64_t k, std::int64_t n, double z = 1.959963984540054);

// Each trial draws a message uniformly, then the channel output.
Estimate monte_carlo_error(const P2PCode& c, const Joint& w, Metric m, std::int64_t trials, Rng& rng);
Estimate monte_carlo_error(const MacCode& c, const Joint& w, std::int64_t trials, Rng& rng);

// Error indicator for message i given every codeword's metric value:
// some other word scores at most alpha_i (within the tie window).
bool decoding_error(const std::vector<double>& alpha, std::size_t i);

}  // namespace relexp::ensemble
