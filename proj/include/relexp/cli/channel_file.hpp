#pragma once

// Plain-text channel files:
//   # comments anywhere
//   dmc |X| |Y|          or   mac |X| |Y| |Z|
//   one row of output probabilities per input (MAC inputs in (x, y) order)

#include <iosfwd>
#include <string>
#include <vector>

#include "relexp/core/joint.hpp"

namespace relexp::cli {

struct ChannelFile {
    bool mac = false;
    std::vector<int> sizes;  // |X| |Y|  or  |X| |Y| |Z|
    Joint w;                 // W(y|x) or W(z|x,y)
};

// Throws InputError on malformed headers, wrong row counts, negative entries
// or rows not summing to one within 1e-9.
ChannelFile parse_channel(std::istream& in);
ChannelFile load_channel(const std::string& path);

// Canonical text: header line, then rows with each entry in the shortest
// decimal form that reads back to the same double.
std::string format_channel(const ChannelFile& c);
std::string format_double(double v);

// Whitespace-separated probabilities with # comments (composition files).
std::vector<double> load_vector(const std::string& path);

// Input distribution of the two-user channel:
//   dist |U| |X| |Y|
//   P(u, x, y) entries in lexicographic (u, x, y) order
Joint parse_distribution(std::istream& in);
Joint load_distribution(const std::string& path);

}  // namespace relexp::cli
