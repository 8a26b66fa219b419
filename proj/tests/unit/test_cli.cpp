#include <sstream>

#include "doctest.h"
#include "relexp/cli/channel_file.hpp"
#include "relexp/cli/commands.hpp"

using namespace relexp;
using namespace relexp::cli;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "relexp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const std::string& name) { return std::string(RELEXP_SOURCE_DIR) + "/data/" + name; }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("rate grids") {
    CHECK(parse_grid("0.3") == std::vector<double>{0.3});
    std::vector<double> g = parse_grid("0:0.1:0.01");
    REQUIRE(g.size() == 11);
    CHECK(g[7] == 0.07);
    CHECK(g.back() == 0.1);
    CHECK_THROWS_AS(parse_grid("0:1"), InputError);
    CHECK_THROWS_AS(parse_grid("1:0:0.1"), InputError);
    CHECK_THROWS_AS(parse_grid("0:x:0.1"), InputError);
    CHECK_THROWS_AS(parse_grid("0:1:1e-6"), CapabilityError);
    CHECK(parse_counts("14,2") == std::vector<int>{14, 2});
    CHECK_THROWS_AS(parse_counts("1,-2"), InputError);
}

TEST_CASE("CSV numbers") {
    CHECK(csv_number(0.1) == "0.1");
    CHECK(csv_number(kInf) == "inf");
    CHECK(csv_number(-kInf) == "-inf");
    CHECK(csv_number(1.0 / 3) == "0.333333333333");
}

TEST_CASE("channel files round-trip through the canonical form") {
    ChannelFile c = load_channel(data("mac_binary.chan"));
    CHECK(c.mac);
    std::istringstream in(format_channel(c));
    ChannelFile back = parse_channel(in);
    CHECK(back.w.max_abs_diff(c.w) == 0.0);
    CHECK(format_channel(back) == format_channel(c));

    std::istringstream bad("dmc 2 2\n0.5 0.6\n0.5 0.5\n");
    CHECK_THROWS_AS(parse_channel(bad), InputError);
    std::istringstream short_rows("dmc 2 2\n0.5 0.5\n");
    CHECK_THROWS_AS(parse_channel(short_rows), InputError);

    Joint p = load_distribution(data("dist_u2.dist"));
    CHECK(p.dims() == std::vector<int>{2, 2, 2});
}

TEST_CASE("exit codes") {
    CHECK(invoke({"dmc-exponent", "--channel", data("bsc_0.1.chan"), "--rate", "0.2", "--family", "r"}).code == kExitOk);
    CHECK(invoke({"dmc-exponent", "--channel", data("missing.chan"), "--rate", "0.2"}).code == kExitInput);
    CHECK(invoke({"dmc-exponent", "--channel", data("bsc_0.1.chan"), "--rate", "abc"}).code == kExitInput);
    CHECK(invoke({"dmc-exponent", "--channel", data("bsc_0.1.chan"), "--rate-grid", "0:1:1e-6"}).code ==
          kExitCapability);
    CHECK(invoke({"no-such-command"}).code == kExitInput);
    // too few samples to keep the small-n two-user lower bands inside
    Run r = invoke({"verify", "--what", "packing-mac", "--samples", "5", "--strict"});
    CHECK(r.code == kExitFlagged);
}

TEST_CASE("outputs carry the manifest and repeat byte for byte") {
    std::vector<std::string> args{"dmc-exponent", "--channel", data("bsc_0.1.chan"), "--rate-grid", "0.1:0.3:0.1",
                                  "--family", "all"};
    Run a = invoke(args), b = invoke(args);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    std::vector<std::string> ls = lines(a.out);
    std::string digest;
    int rows = 0;
    for (const std::string& l : ls) {
        if (l.rfind("#", 0) == 0) continue;
        std::string first = l.substr(0, l.find(','));
        if (first == "manifest") continue;
        if (digest.empty()) digest = first;
        CHECK(first == digest);
        ++rows;
    }
    CHECK(digest.size() == 16);
    CHECK(rows == 15);
}

TEST_CASE("rates above capacity give zero") {
    Run r = invoke({"dmc-exponent", "--channel", data("bsc_0.1.chan"), "--rate", "0.9", "--family", "r"});
    REQUIRE(r.code == kExitOk);
    std::vector<std::string> ls = lines(r.out);
    const std::string& row = ls.back();
    // rate,family,metric,composition,value_bits
    std::vector<std::string> f;
    std::istringstream in(row);
    for (std::string t; std::getline(in, t, ',');) f.push_back(t);
    REQUIRE(f.size() > 5);
    CHECK(std::abs(std::stod(f[5])) < 1e-9);
}
