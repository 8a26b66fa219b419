#pragma once

// Command-line front end. Every output starts with the run manifest as
// "# key: value" lines, and every CSV row begins with the manifest digest.

#include <iosfwd>
#include <string>
#include <vector>

namespace relexp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCapability = 3;
inline constexpr int kExitFlagged = 4;  // only with --strict

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "a:b:step" (b included when the steps land on it) or a single number.
std::vector<double> parse_grid(const std::string& s);
// Comma-separated integers, e.g. "14,2".
std::vector<int> parse_counts(const std::string& s);
// 12 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string csv_number(double v);

}  // namespace relexp::cli
