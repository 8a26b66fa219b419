#include "relexp/ensemble/error_prob.hpp"

#include <cmath>
#include <random>

namespace relexp::ensemble {

bool decoding_error(const std::vector<double>& alpha, std::size_t i) {
    for (std::size_t j = 0; j < alpha.size(); ++j)
        if (j != i && alpha_leq(alpha[j], alpha[i])) return true;
    return false;
}

namespace {

void check_outputs(int alphabet, int n, const ErrorOptions& opt) {
    if (std::pow(static_cast<double>(alphabet), n) > opt.max_outputs)
        throw CapabilityError("exhaustive error evaluation needs " + std::to_string(alphabet) + "^" + std::to_string(n) +
                              " outputs; use the Monte Carlo estimate");
}

// Advances s to the next sequence over {0..alphabet-1}; false after the last.
bool next_sequence(Sequence& s, int alphabet) {
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (++s[t] < alphabet) return true;
        s[t] = 0;
    }
    return false;
}

Sequence channel_output(const Sequence& x, const Joint& w, Rng& rng) {
    int ny = w.dim(1);
    Sequence y(x.size());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        double r = unif(rng), acc = 0;
        int b = 0;
        for (; b < ny - 1; ++b) {
            acc += w[static_cast<std::size_t>(x[t] * ny + b)];
            if (r < acc) break;
        }
        y[t] = static_cast<std::uint8_t>(b);
    }
    return y;
}

Sequence mac_output(const Sequence& x, const Sequence& y, const Joint& w, Rng& rng) {
    int ny = w.dim(1), nz = w.dim(2);
    Sequence z(x.size());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        std::size_t row = static_cast<std::size_t>((x[t] * ny + y[t]) * nz);
        double r = unif(rng), acc = 0;
        int b = 0;
        for (; b < nz - 1; ++b) {
            acc += w[row + static_cast<std::size_t>(b)];
            if (r < acc) break;
        }
        z[t] = static_cast<std::uint8_t>(b);
    }
    return z;
}

void check_p2p_channel(const P2PCode& c, const Joint& w) {
    if (w.rank() != 2 || w.dim(0) != c.nx) throw InputError("channel input alphabet does not match the code");
}

void check_mac_channel(const MacCode& c, const Joint& w) {
    if (w.rank() != 3 || w.dim(0) != c.nx || w.dim(1) != c.ny) throw InputError("channel inputs do not match the code");
}

}  // namespace

double exact_error(const P2PCode& c, const Joint& w, Metric m, const ErrorOptions& opt) {
    check_p2p_channel(c, w);
    int ny = w.dim(1);
    check_outputs(ny, c.n, opt);
    if (c.size() == 1) return 0.0;
    P2PMetricTable metric(m, w);
    std::vector<int> dims{c.nx, ny};
    std::size_t mm = c.words.size();
    std::vector<double> alpha(mm);
    Sequence y(static_cast<std::size_t>(c.n), 0);
    double total = 0;
    do {
        for (std::size_t j = 0; j < mm; ++j) alpha[j] = metric(joint_counts({&c.words[j], &y}, dims));
        for (std::size_t i = 0; i < mm; ++i) {
            double p = 1;
            for (std::size_t t = 0; t < y.size() && p > 0; ++t) p *= w[static_cast<std::size_t>(c.words[i][t] * ny + y[t])];
            if (p > 0 && decoding_error(alpha, i)) total += p;
        }
    } while (next_sequence(y, ny));
    return total / static_cast<double>(mm);
}

double exact_error(const MacCode& c, const Joint& w, const ErrorOptions& opt) {
    check_mac_channel(c, w);
    int nz = w.dim(2);
    check_outputs(nz, c.n, opt);
    int mx = c.mx(), my = c.my();
    if (mx * my == 1) return 0.0;
    MacMetricTable metric(c.nu, c.nx, c.ny, nz);
    std::vector<int> dims{c.nu, c.nx, c.ny, nz};
    std::vector<double> alpha(static_cast<std::size_t>(mx * my));
    Sequence z(static_cast<std::size_t>(c.n), 0);
    double total = 0;
    do {
        for (int k = 0; k < mx; ++k)
            for (int l = 0; l < my; ++l)
                alpha[static_cast<std::size_t>(k * my + l)] =
                    metric(joint_counts({&c.u, &c.cx[static_cast<std::size_t>(k)], &c.cy[static_cast<std::size_t>(l)], &z}, dims));
        for (int i = 0; i < mx; ++i)
            for (int j = 0; j < my; ++j) {
                const Sequence& x = c.cx[static_cast<std::size_t>(i)];
                const Sequence& y = c.cy[static_cast<std::size_t>(j)];
                double p = 1;
                for (std::size_t t = 0; t < z.size() && p > 0; ++t)
                    p *= w[static_cast<std::size_t>((x[t] * c.ny + y[t]) * nz + z[t])];
                if (p > 0 && decoding_error(alpha, static_cast<std::size_t>(i * my + j))) total += p;
            }
    } while (next_sequence(z, nz));
    return total / (static_cast<double>(mx) * my);
}

Estimate wilson(std::int64_t k, std::int64_t n, double z) {
    Estimate e;
    e.errors = k;
    e.trials = n;
    if (n <= 0) return e;
    double nn = static_cast<double>(n);
    double p = static_cast<double>(k) / nn;
    double z2 = z * z;
    double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
    double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    e.value = p;
    e.lo = std::max(0.0, centre - half);
    e.hi = std::min(1.0, centre + half);
    return e;
}

Estimate monte_carlo_error(const P2PCode& c, const Joint& w, Metric m, std::int64_t trials, Rng& rng) {
    check_p2p_channel(c, w);
    if (trials < 1) throw InputError("at least one trial is needed");
    if (c.size() == 1) return wilson(0, trials);
    P2PMetricTable metric(m, w);
    std::vector<int> dims{c.nx, w.dim(1)};
    std::vector<double> alpha(c.words.size());
    std::uniform_int_distribution<std::size_t> pick(0, c.words.size() - 1);
    std::int64_t errors = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        std::size_t i = pick(rng);
        Sequence y = channel_output(c.words[i], w, rng);
        for (std::size_t j = 0; j < c.words.size(); ++j) alpha[j] = metric(joint_counts({&c.words[j], &y}, dims));
        if (decoding_error(alpha, i)) ++errors;
    }
    return wilson(errors, trials);
}

Estimate monte_carlo_error(const MacCode& c, const Joint& w, std::int64_t trials, Rng& rng) {
    check_mac_channel(c, w);
    if (trials < 1) throw InputError("at least one trial is needed");
    int mx = c.mx(), my = c.my();
    if (mx * my == 1) return wilson(0, trials);
    MacMetricTable metric(c.nu, c.nx, c.ny, w.dim(2));
    std::vector<int> dims{c.nu, c.nx, c.ny, w.dim(2)};
    std::vector<double> alpha(static_cast<std::size_t>(mx * my));
    std::uniform_int_distribution<int> pick_x(0, mx - 1), pick_y(0, my - 1);
    std::int64_t errors = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        int i = pick_x(rng), j = pick_y(rng);
        Sequence z = mac_output(c.cx[static_cast<std::size_t>(i)], c.cy[static_cast<std::size_t>(j)], w, rng);
        for (int k = 0; k < mx; ++k)
            for (int l = 0; l < my; ++l)
                alpha[static_cast<std::size_t>(k * my + l)] =
                    metric(joint_counts({&c.u, &c.cx[static_cast<std::size_t>(k)], &c.cy[static_cast<std::size_t>(l)], &z}, dims));
        if (decoding_error(alpha, static_cast<std::size_t>(i * my + j))) ++errors;
    }
    return wilson(errors, trials);
}

}  // namespace relexp::ensemble
