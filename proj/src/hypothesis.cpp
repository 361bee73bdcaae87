#include "bhtrl/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bhtrl {

namespace {

void check_alpha(std::span<const double> alpha, int expected) {
    if (static_cast<int>(alpha.size()) != expected)
        throw ContractError("hypothesis test: alpha length must equal the number of next-state symbols");
    for (double a : alpha)
        if (!(a > 0.0)) throw DomainError("hypothesis test: alpha entries must be positive");
}

// ln B(alpha + n) - ln B(alpha); exactly zero for an all-zero count row.
template <typename Counts>
double log_beta_gain(std::span<const double> alpha, double log_beta_alpha, const Counts& n, std::vector<double>& scratch) {
    bool any = false;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        scratch[i] = alpha[i] + static_cast<double>(n[i]);
        any = any || n[i] != 0;
    }
    if (!any) return 0.0;
    return log_multivariate_beta(scratch) - log_beta_alpha;
}

}  // namespace

double log_bayes_factor(const TransitionCounts& counts, std::span<const double> alpha) {
    check_alpha(alpha, counts.num_next());
    // One next-state symbol: every row predicts it with probability 1 under both models.
    if (counts.num_next() == 1) return 0.0;
    const double log_beta_alpha = log_multivariate_beta(alpha);
    std::vector<double> scratch(alpha.size());
    double total = 0.0;
    for (int s = 0; s < counts.num_states(); ++s) {
        double untied = 0.0;
        for (int a = 0; a < counts.num_actions(); ++a)
            untied += log_beta_gain(alpha, log_beta_alpha, counts.row(s, a), scratch);
        const double tied = log_beta_gain(alpha, log_beta_alpha, counts.tied_row(s), scratch);
        total += untied - tied;
    }
    return total;
}

double posterior_null_probability(const TransitionCounts& counts, std::span<const double> alpha, double prior_h0) {
    if (!(prior_h0 >= 0.0 && prior_h0 <= 1.0)) throw DomainError("hypothesis test: prior_h0 must lie in [0, 1]");
    const double log_bf = log_bayes_factor(counts, alpha);
    if (prior_h0 == 0.0 || prior_h0 == 1.0 || log_bf == 0.0) return prior_h0;
    const double log_w0 = std::log(prior_h0);
    const double log_w1 = std::log1p(-prior_h0) + log_bf;
    const double p = std::exp(log_w0 - log_sum_exp(log_w0, log_w1));
    return std::min(1.0, std::max(0.0, p));
}

double factored_posterior_null_probability(const TransitionCounts& endo_counts, std::span<const double> alpha,
                                           double prior_h0) {
    if (endo_counts.num_states() != endo_counts.num_next())
        throw ContractError("factored hypothesis test: endogenous counts must be square in z");
    return posterior_null_probability(endo_counts, alpha, prior_h0);
}

TransitionCounts endogenous_counts(const TransitionCounts& flat, const FactoredLayout& layout) {
    if (flat.num_states() != layout.num_states() || flat.num_next() != layout.num_states())
        throw ContractError("endogenous_counts: layout does not match count tensor");
    TransitionCounts out(layout.endo_size, flat.num_actions(), layout.endo_size);
    for (int s = 0; s < flat.num_states(); ++s)
        for (int a = 0; a < flat.num_actions(); ++a)
            for (int next = 0; next < flat.num_next(); ++next)
                if (const long long n = flat.at(s, a, next); n != 0)
                    out.add(layout.endo_of(s), a, layout.endo_of(next), n);
    return out;
}

}  // namespace bhtrl
