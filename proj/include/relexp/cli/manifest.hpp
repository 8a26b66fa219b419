#pragma once

// Run manifests: everything needed to reproduce an output file.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relexp::cli {

inline constexpr const char* kToolVersion = "1.0.0";

std::string sha256_hex(std::string_view data);
// Digest of a file's bytes; throws InputError when it cannot be read.
std::string file_sha256(const std::string& path);

struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> flags;   // name, value; in a fixed order
    std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
    std::string version = kToolVersion;

    void add_input(const std::string& path);
    // Comment lines ("# key: value") placed at the top of every output.
    std::string text() const;
    // Short digest of text(); carried on every CSV row.
    std::string digest() const;
};

}  // namespace relexp::cli
