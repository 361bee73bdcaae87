#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhtrl {

/// Thrown when an argument lies outside a function's mathematical domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Thrown when callers break a structural contract (shape mismatch, bad index).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Seeded 64-bit generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The std:: distributions are not (their algorithms are
/// implementation-defined), so every variate below is generated by code in
/// this library from raw 64-bit words.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n) by rejection (no modulo bias).
    std::uint64_t uniform_index(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

/// One splitmix64 step: the finalizer applied to x + 0x9E3779B97F4A7C15.
/// Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Independent stream for (master_seed, stream_index). The engine seed is
/// mix64(master_seed ^ mix64(stream_index + 0x9E3779B97F4A7C15)).
Rng derive_stream(std::uint64_t master_seed, std::uint64_t stream_index);

/// ln Gamma(x) for x > 0. Stirling series after upward recurrence to x >= 7.
double log_gamma(double x);

/// ln B(alpha) = sum_i lnGamma(alpha_i) - lnGamma(sum_i alpha_i).
double log_multivariate_beta(std::span<const double> alpha);

/// ln(e^a + e^b), with -inf as the absorbing zero.
double log_sum_exp(double a, double b);

double sample_normal(double mean, double variance, Rng& rng);

/// Gamma(shape, 1). Marsaglia-Tsang squeeze; shape < 1 goes through the
/// Gamma(shape + 1) * U^(1/shape) boost.
double sample_gamma(double shape, Rng& rng);

std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng);
void sample_dirichlet_into(std::span<const double> alpha, Rng& rng, std::span<double> out);

/// Draws 1 with probability p. p == 0 and p == 1 are decided without
/// consuming the stream.
bool sample_bernoulli(double p, Rng& rng);

/// Inverse-CDF draw from an unnormalized-safe probability row.
int sample_categorical(std::span<const double> probs, Rng& rng);

}  // namespace bhtrl
