#include "relexp/cli/channel_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace relexp::cli {

namespace {

std::vector<std::string> tokens(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) out.push_back(t);
    }
    return out;
}

double to_double(const std::string& t) {
    double v = 0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v))
        throw InputError("not a number: '" + t + "'");
    return v;
}

int to_size(const std::string& t) {
    int v = 0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || v < 1 || v > 255)
        throw InputError("alphabet size must be an integer in [1, 255]: '" + t + "'");
    return v;
}

}  // namespace

ChannelFile parse_channel(std::istream& in) {
    std::vector<std::string> t = tokens(in);
    if (t.empty()) throw InputError("channel file is empty");
    ChannelFile c;
    std::size_t pos = 1;
    if (t[0] == "dmc") {
        if (t.size() < 3) throw InputError("dmc header needs |X| |Y|");
        c.sizes = {to_size(t[1]), to_size(t[2])};
        pos = 3;
    } else if (t[0] == "mac") {
        if (t.size() < 4) throw InputError("mac header needs |X| |Y| |Z|");
        c.mac = true;
        c.sizes = {to_size(t[1]), to_size(t[2]), to_size(t[3])};
        pos = 4;
    } else {
        throw InputError("channel file must start with 'dmc' or 'mac'");
    }
    std::size_t cells = cell_count(c.sizes);
    if (t.size() - pos != cells)
        throw InputError("channel file has " + std::to_string(t.size() - pos) + " entries, expected " +
                         std::to_string(cells));
    std::vector<double> mass;
    for (std::size_t k = pos; k < t.size(); ++k) {
        double v = to_double(t[k]);
        if (v < 0) throw InputError("negative transition probability");
        mass.push_back(v);
    }
    c.w = Joint(c.sizes, std::move(mass));
    check_conditional(c.w, c.mac ? 2 : 1, 1e-9, "channel");
    return c;
}

ChannelFile load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open channel file: " + path);
    return parse_channel(in);
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

std::string format_channel(const ChannelFile& c) {
    std::ostringstream o;
    o << (c.mac ? "mac" : "dmc");
    for (int s : c.sizes) o << ' ' << s;
    o << '\n';
    std::size_t width = static_cast<std::size_t>(c.sizes.back());
    for (std::size_t k = 0; k < c.w.size(); ++k) {
        o << format_double(c.w[k]);
        o << ((k + 1) % width == 0 ? '\n' : ' ');
    }
    return o.str();
}

std::vector<double> load_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::vector<double> v;
    for (const std::string& t : tokens(in)) v.push_back(to_double(t));
    if (v.empty()) throw InputError("no numbers in " + path);
    return v;
}

Joint parse_distribution(std::istream& in) {
    std::vector<std::string> t = tokens(in);
    if (t.size() < 4 || t[0] != "dist") throw InputError("distribution file must start with 'dist |U| |X| |Y|'");
    std::vector<int> dims{to_size(t[1]), to_size(t[2]), to_size(t[3])};
    if (t.size() - 4 != cell_count(dims))
        throw InputError("distribution file has " + std::to_string(t.size() - 4) + " entries, expected " +
                         std::to_string(cell_count(dims)));
    std::vector<double> mass;
    for (std::size_t k = 4; k < t.size(); ++k) {
        double v = to_double(t[k]);
        if (v < 0) throw InputError("negative probability");
        mass.push_back(v);
    }
    Joint p(dims, std::move(mass));
    if (!p.is_distribution(1e-9)) throw InputError("distribution does not sum to one");
    return p;
}

Joint load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open distribution file: " + path);
    return parse_distribution(in);
}

}  // namespace relexp::cli
