#include "bhtrl/mathstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bhtrl {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw ContractError("uniform_index: empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return Rng(mix64(master_seed ^ mix64(stream_index + 0x9E3779B97F4A7C15ULL)));
}

namespace {

// Stirling series for y >= 7; truncation error below 1e-14 there.
double stirling_log_gamma(double y) {
    constexpr double half_log_two_pi = 0.91893853320467274178;
    const double inv = 1.0 / y;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 / 12.0 +
               inv2 * (-1.0 / 360.0 +
                       inv2 * (1.0 / 1260.0 +
                               inv2 * (-1.0 / 1680.0 +
                                       inv2 * (1.0 / 1188.0 +
                                               inv2 * (-691.0 / 360360.0 +
                                                       inv2 * (1.0 / 156.0 +
                                                               inv2 * (-3617.0 / 122400.0))))))));
    return (y - 0.5) * std::log(y) - y + half_log_two_pi + series;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    if (std::isinf(x)) return x;
    if (x == 1.0 || x == 2.0) return 0.0;
    if (x >= 7.0) return stirling_log_gamma(x);

    // Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1)); n chosen so x + n >= 7.
    double shifted = x;
    double product = 1.0;
    while (shifted < 7.0) {
        product *= shifted;
        shifted += 1.0;
    }
    return stirling_log_gamma(shifted) - std::log(product);
}

double log_multivariate_beta(std::span<const double> alpha) {
    if (alpha.size() < 2) throw DomainError("log_multivariate_beta: need at least two entries");
    double total = 0.0;
    double sum_log = 0.0;
    for (double a : alpha) {
        if (!(a > 0.0)) throw DomainError("log_multivariate_beta: entries must be positive");
        sum_log += log_gamma(a);
        total += a;
    }
    return sum_log - log_gamma(total);
}

double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double sample_normal(double mean, double variance, Rng& rng) {
    if (!(variance >= 0.0)) throw DomainError("sample_normal: variance must be nonnegative");
    if (variance == 0.0) return mean;
    // Marsaglia polar method; the second variate is discarded so that every
    // call consumes a self-contained block of the stream.
    double u, v, s;
    do {
        u = 2.0 * rng.uniform01() - 1.0;
        v = 2.0 * rng.uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double z = u * std::sqrt(-2.0 * std::log(s) / s);
    return mean + std::sqrt(variance) * z;
}

double sample_gamma(double shape, Rng& rng) {
    if (!(shape > 0.0)) throw DomainError("sample_gamma: shape must be positive");
    if (shape < 1.0) {
        const double g = sample_gamma(shape + 1.0, rng);
        double u;
        do {
            u = rng.uniform01();
        } while (u == 0.0);
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_normal(0.0, 1.0, rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void sample_dirichlet_into(std::span<const double> alpha, Rng& rng, std::span<double> out) {
    if (alpha.empty()) throw ContractError("sample_dirichlet: empty parameter vector");
    if (out.size() != alpha.size()) throw ContractError("sample_dirichlet: output size mismatch");
    for (double a : alpha) {
        if (!(a > 0.0)) throw DomainError("sample_dirichlet: entries must be positive");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = sample_gamma(alpha[i], rng);
        total += out[i];
    }
    if (total > 0.0) {
        for (double& x : out) x /= total;
        return;
    }
    // Every gamma draw underflowed (only possible for tiny shapes); the
    // limit of the normalized vector is a point mass on one coordinate.
    std::vector<double> weights(alpha.begin(), alpha.end());
    const int hit = sample_categorical(weights, rng);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (static_cast<int>(i) == hit) ? 1.0 : 0.0;
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng) {
    std::vector<double> out(alpha.size());
    sample_dirichlet_into(alpha, rng, out);
    return out;
}

bool sample_bernoulli(double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_bernoulli: p must lie in [0, 1]");
    if (p == 0.0) return false;
    if (p == 1.0) return true;
    return rng.uniform01() < p;
}

int sample_categorical(std::span<const double> probs, Rng& rng) {
    if (probs.empty()) throw ContractError("sample_categorical: empty distribution");
    double total = 0.0;
    for (double p : probs) total += p;
    const double target = rng.uniform01() * total;
    double cumulative = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        cumulative += probs[i];
        last_positive = static_cast<int>(i);
        if (target < cumulative) return last_positive;
    }
    if (last_positive < 0) throw DomainError("sample_categorical: no positive mass");
    return last_positive;
}

}  // namespace bhtrl
