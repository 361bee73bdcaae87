#pragma once

#include <span>
#include <vector>

#include "bhtrl/core.hpp"

namespace bhtrl {

/// Posterior probability that actions do not affect transitions.
///
/// Tied model H0: one Dirichlet(alpha) row per conditioning state shared by
/// all actions. Untied model H1: one Dirichlet(alpha) row per (state, action).
/// With N_s = sum_a N_{s,a},
///   log W0 = ln P(H0) + S(A-1) ln B(alpha) + sum_s ln B(alpha + N_s)
///   log W1 = ln P(H1) + sum_{s,a} ln B(alpha + N_{s,a})
/// and the result is W0 / (W0 + W1), evaluated in log space. Both evidence
/// terms are accumulated per state as differences against ln B(alpha), so a
/// state without data contributes exactly zero and an uninformative history
/// returns the prior bit-for-bit.
///
/// `alpha` has one entry per next-state symbol (counts.num_next()).
double posterior_null_probability(const TransitionCounts& counts, std::span<const double> alpha, double prior_h0);

/// ln(P(data | H1) / P(data | H0)).
double log_bayes_factor(const TransitionCounts& counts, std::span<const double> alpha);

/// Same test restricted to the endogenous sub-state: counts are indexed
/// (z, a, z') and alpha has |Z| entries.
double factored_posterior_null_probability(const TransitionCounts& endo_counts, std::span<const double> alpha,
                                           double prior_h0);

/// Aggregates flat (s, a, s') counts onto endogenous coordinates (z, a, z').
TransitionCounts endogenous_counts(const TransitionCounts& flat, const FactoredLayout& layout);

}  // namespace bhtrl
