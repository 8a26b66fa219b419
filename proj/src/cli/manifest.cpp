#include "relexp/cli/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "relexp/core/joint.hpp"

namespace relexp::cli {

std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 15];
    }
    return out;
}

std::string file_sha256(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
}

void Manifest::add_input(const std::string& path) { inputs.emplace_back(path, file_sha256(path)); }

std::string Manifest::text() const {
    std::ostringstream o;
    o << "# tool: relexp " << version << '\n';
    o << "# command: " << command << '\n';
    for (const auto& [k, v] : flags) o << "# flag: --" << k << ' ' << v << '\n';
    for (const auto& [p, d] : inputs) o << "# input: " << p << " sha256=" << d << '\n';
    return o.str();
}

std::string Manifest::digest() const { return sha256_hex(text()).substr(0, 16); }

}  // namespace relexp::cli
