#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhtrl/core.hpp"
#include "bhtrl/envs.hpp"

namespace bhtrl {

/// Conjugate Normal posterior over per-(s,a) mean rewards with known
/// observation variance.
struct NormalRewardPosterior {
    double prior_mean = 1.0;
    double prior_var = 1.0;
    double obs_var = 0.01;
    RewardStats stats;

    NormalRewardPosterior() = default;
    NormalRewardPosterior(int states, int actions, double mean, double var, double noise_var);

    double posterior_var(int s, int a) const;
    double posterior_mean(int s, int a) const;
    /// One draw per (s, a), state-major. Returned as an S * A table.
    std::vector<double> sample_means(Rng& rng) const;
};

/// Greedy policy on sampled means, constant in h.
Policy cb_ps_plan(const NormalRewardPosterior& rewards, int horizon, Rng& rng);

/// Samples rewards (as cb_ps_plan), then every row theta_{s,a} ~
/// Dirichlet(alpha + N_{s,a}) in (s, a) order, and plans on the sample.
Policy mdp_ps_plan(const NormalRewardPosterior& rewards, const TransitionCounts& counts, std::span<const double> alpha,
                   int horizon, Rng& rng);

/// Known exogenous dynamics, or a tied Dirichlet posterior over them.
struct ExogenousModel {
    const FactoredDynamics* known = nullptr;  // used when exo_counts is null
    const TransitionCounts* exo_counts = nullptr;  // (x, 1, x') when learned
    double exo_alpha = 1.0;
};

/// Factored posterior sample: rewards, then endogenous rows
/// Dirichlet(alpha + N_{z,a}), then (if learned) exogenous rows. The flat
/// model is composed from the factors and solved.
Policy factored_mdp_ps_plan(const NormalRewardPosterior& rewards, const TransitionCounts& endo_counts,
                            std::span<const double> alpha, const FactoredLayout& layout, const ExogenousModel& exo,
                            int horizon, Rng& rng);

enum class Branch { kCb, kMdp };

struct BhtPlan {
    Policy policy;
    Branch branch = Branch::kCb;
    double p_h0 = 0.0;
};

/// One BHT step: p = posterior_null_probability, B ~ Bernoulli(p), then the
/// CB or MDP planner. A degenerate p (0 or 1) consumes no randomness for
/// the indicator, so the stream matches the chosen base planner exactly.
BhtPlan bht_plan(const NormalRewardPosterior& rewards, const TransitionCounts& counts, std::span<const double> alpha,
                 double prior_h0, int horizon, Rng& rng);

struct PlanOutcome {
    Policy policy;
    std::optional<double> p_h0;
    std::optional<Branch> branch;
};

/// Episodic learner. plan_episode reads the posterior state only; observe is
/// the single mutator.
class Agent {
public:
    virtual ~Agent() = default;
    virtual PlanOutcome plan_episode(Rng& rng) const = 0;
    virtual void observe(const EpisodeRecord& episode) = 0;
};

struct AgentOptions {
    double reward_prior_mean = 1.0;
    double reward_prior_var = 1.0;
    double obs_var = 0.01;
    std::vector<double> alpha;  // already expanded to the tested alphabet
    double prior_h0 = 0.5;
    bool learn_exogenous = false;
    double exo_alpha = 1.0;
};

std::unique_ptr<Agent> make_cb_ps_agent(const MdpModel& shape, const AgentOptions& options);
std::unique_ptr<Agent> make_mdp_ps_agent(const MdpModel& shape, const AgentOptions& options);
std::unique_ptr<Agent> make_bht_agent(const MdpModel& shape, const AgentOptions& options);
/// `env` must carry factored dynamics; only its layout and (unless learned)
/// exogenous factors are read. The environment must outlive the agent.
std::unique_ptr<Agent> make_factored_bht_agent(const Environment& env, const AgentOptions& options);
/// Plays the true optimal policy every episode; zero-regret baseline.
std::unique_ptr<Agent> make_optimal_agent(const MdpModel& truth);

std::string to_string(Branch branch);

}  // namespace bhtrl
