#include "bhtrl/agents.hpp"

#include "bhtrl/hypothesis.hpp"
#include "bhtrl/planning.hpp"

namespace bhtrl {

NormalRewardPosterior::NormalRewardPosterior(int states, int actions, double mean, double var, double noise_var)
    : prior_mean(mean), prior_var(var), obs_var(noise_var), stats(states, actions) {
    if (!(var > 0.0)) throw DomainError("reward posterior: prior variance must be positive");
    if (!(noise_var > 0.0)) throw DomainError("reward posterior: observation variance must be positive");
}

double NormalRewardPosterior::posterior_var(int s, int a) const {
    return 1.0 / (1.0 / prior_var + static_cast<double>(stats.count(s, a)) / obs_var);
}

double NormalRewardPosterior::posterior_mean(int s, int a) const {
    return posterior_var(s, a) * (prior_mean / prior_var + stats.sum(s, a) / obs_var);
}

std::vector<double> NormalRewardPosterior::sample_means(Rng& rng) const {
    const int S = stats.num_states();
    const int A = stats.num_actions();
    std::vector<double> out(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            out[static_cast<std::size_t>(s) * A + a] = sample_normal(posterior_mean(s, a), posterior_var(s, a), rng);
    return out;
}

Policy cb_ps_plan(const NormalRewardPosterior& rewards, int horizon, Rng& rng) {
    const int S = rewards.stats.num_states();
    const int A = rewards.stats.num_actions();
    const std::vector<double> means = rewards.sample_means(rng);
    Policy policy(S, horizon);
    for (int s = 0; s < S; ++s) {
        int best = 0;
        for (int a = 1; a < A; ++a)
            if (means[static_cast<std::size_t>(s) * A + a] > means[static_cast<std::size_t>(s) * A + best]) best = a;
        for (int h = 0; h < horizon; ++h) policy.at(s, h) = best;
    }
    return policy;
}

namespace {

MdpModel sampled_shell(const NormalRewardPosterior& rewards, int horizon, Rng& rng) {
    const int S = rewards.stats.num_states();
    const int A = rewards.stats.num_actions();
    MdpModel sample(S, A, horizon);
    sample.reward_mean = rewards.sample_means(rng);
    std::fill(sample.start_dist.begin(), sample.start_dist.end(), 1.0 / S);
    return sample;
}

void sample_rows(const TransitionCounts& counts, std::span<const double> alpha, Rng& rng,
                 std::vector<double>& out) {
    const int n = counts.num_next();
    if (static_cast<int>(alpha.size()) != n) throw ContractError("posterior sampling: alpha length mismatch");
    std::vector<double> posterior(static_cast<std::size_t>(n));
    out.resize(static_cast<std::size_t>(counts.num_states()) * counts.num_actions() * n);
    for (int s = 0; s < counts.num_states(); ++s) {
        for (int a = 0; a < counts.num_actions(); ++a) {
            const auto row = counts.row(s, a);
            for (int j = 0; j < n; ++j) posterior[j] = alpha[j] + static_cast<double>(row[j]);
            const std::size_t offset = (static_cast<std::size_t>(s) * counts.num_actions() + a) * n;
            sample_dirichlet_into(posterior, rng, std::span<double>(out.data() + offset, static_cast<std::size_t>(n)));
        }
    }
}

}  // namespace

Policy mdp_ps_plan(const NormalRewardPosterior& rewards, const TransitionCounts& counts, std::span<const double> alpha,
                   int horizon, Rng& rng) {
    MdpModel sample = sampled_shell(rewards, horizon, rng);
    if (counts.num_states() != sample.num_states || counts.num_actions() != sample.num_actions ||
        counts.num_next() != sample.num_states)
        throw ContractError("mdp_ps_plan: count tensor does not match the reward posterior");
    sample_rows(counts, alpha, rng, sample.transitions);
    return backward_induction(sample).policy;
}

Policy factored_mdp_ps_plan(const NormalRewardPosterior& rewards, const TransitionCounts& endo_counts,
                            std::span<const double> alpha, const FactoredLayout& layout, const ExogenousModel& exo,
                            int horizon, Rng& rng) {
    MdpModel sample = sampled_shell(rewards, horizon, rng);
    if (sample.num_states != layout.num_states()) throw ContractError("factored_mdp_ps_plan: layout size mismatch");
    FactoredDynamics dynamics;
    dynamics.layout = layout;
    dynamics.num_actions = sample.num_actions;
    std::vector<double> by_state;
    sample_rows(endo_counts, alpha, rng, by_state);
    // Counts are (z, a, z'); the factor table is stored (a, z, z').
    const int Z = layout.endo_size;
    const int A = sample.num_actions;
    if (endo_counts.num_states() != Z || endo_counts.num_actions() != A || endo_counts.num_next() != Z)
        throw ContractError("factored_mdp_ps_plan: endogenous counts do not match the layout");
    dynamics.endo_transition.resize(by_state.size());
    for (int z = 0; z < Z; ++z)
        for (int a = 0; a < A; ++a)
            for (int n = 0; n < Z; ++n)
                dynamics.endo_transition[(static_cast<std::size_t>(a) * Z + z) * Z + n] =
                    by_state[(static_cast<std::size_t>(z) * A + a) * Z + n];
    if (exo.exo_counts != nullptr) {
        const std::vector<double> exo_alpha(static_cast<std::size_t>(layout.exo_size()), exo.exo_alpha);
        sample_rows(*exo.exo_counts, exo_alpha, rng, dynamics.exo_transition);
    } else {
        if (exo.known == nullptr) throw ContractError("factored_mdp_ps_plan: no exogenous dynamics supplied");
        dynamics.exo_transition = exo.known->exo_transition;
    }
    sample.transitions = compose_transitions(dynamics);
    return backward_induction(sample).policy;
}

BhtPlan bht_plan(const NormalRewardPosterior& rewards, const TransitionCounts& counts, std::span<const double> alpha,
                 double prior_h0, int horizon, Rng& rng) {
    BhtPlan out;
    out.p_h0 = posterior_null_probability(counts, alpha, prior_h0);
    if (sample_bernoulli(out.p_h0, rng)) {
        out.branch = Branch::kCb;
        out.policy = cb_ps_plan(rewards, horizon, rng);
    } else {
        out.branch = Branch::kMdp;
        out.policy = mdp_ps_plan(rewards, counts, alpha, horizon, rng);
    }
    return out;
}

std::string to_string(Branch branch) { return branch == Branch::kCb ? "CB" : "MDP"; }

namespace {

class CbPsAgent final : public Agent {
public:
    CbPsAgent(const MdpModel& shape, const AgentOptions& o)
        : horizon_(shape.horizon),
          rewards_(shape.num_states, shape.num_actions, o.reward_prior_mean, o.reward_prior_var, o.obs_var) {}

    PlanOutcome plan_episode(Rng& rng) const override { return {cb_ps_plan(rewards_, horizon_, rng), {}, {}}; }

    void observe(const EpisodeRecord& episode) override {
        for (const Step& step : episode.steps) rewards_.stats.add(step.state, step.action, step.reward);
    }

private:
    int horizon_;
    NormalRewardPosterior rewards_;
};

class MdpPsAgent : public Agent {
public:
    MdpPsAgent(const MdpModel& shape, const AgentOptions& o)
        : horizon_(shape.horizon),
          alpha_(o.alpha),
          rewards_(shape.num_states, shape.num_actions, o.reward_prior_mean, o.reward_prior_var, o.obs_var),
          counts_(shape.num_states, shape.num_actions, shape.num_states) {
        if (static_cast<int>(alpha_.size()) != shape.num_states)
            throw ContractError("agent: alpha length must equal the number of states");
    }

    PlanOutcome plan_episode(Rng& rng) const override {
        return {mdp_ps_plan(rewards_, counts_, alpha_, horizon_, rng), {}, {}};
    }

    void observe(const EpisodeRecord& episode) override { update_counts(counts_, rewards_.stats, episode); }

protected:
    int horizon_;
    std::vector<double> alpha_;
    NormalRewardPosterior rewards_;
    TransitionCounts counts_;
};

class BhtAgent final : public MdpPsAgent {
public:
    BhtAgent(const MdpModel& shape, const AgentOptions& o) : MdpPsAgent(shape, o), prior_h0_(o.prior_h0) {}

    PlanOutcome plan_episode(Rng& rng) const override {
        BhtPlan plan = bht_plan(rewards_, counts_, alpha_, prior_h0_, horizon_, rng);
        return {std::move(plan.policy), plan.p_h0, plan.branch};
    }

private:
    double prior_h0_;
};

class FactoredBhtAgent final : public Agent {
public:
    FactoredBhtAgent(const Environment& env, const AgentOptions& o)
        : dynamics_(&*env.factored),
          horizon_(env.model.horizon),
          alpha_(o.alpha),
          prior_h0_(o.prior_h0),
          learn_exogenous_(o.learn_exogenous),
          exo_alpha_(o.exo_alpha),
          rewards_(env.model.num_states, env.model.num_actions, o.reward_prior_mean, o.reward_prior_var, o.obs_var),
          endo_counts_(dynamics_->layout.endo_size, env.model.num_actions, dynamics_->layout.endo_size),
          exo_counts_(dynamics_->layout.exo_size(), 1, dynamics_->layout.exo_size()) {
        if (static_cast<int>(alpha_.size()) != dynamics_->layout.endo_size)
            throw ContractError("factored agent: alpha length must equal the endogenous state count");
        if (!(exo_alpha_ > 0.0)) throw DomainError("factored agent: exo_alpha must be positive");
    }

    PlanOutcome plan_episode(Rng& rng) const override {
        PlanOutcome out;
        const double p = factored_posterior_null_probability(endo_counts_, alpha_, prior_h0_);
        out.p_h0 = p;
        if (sample_bernoulli(p, rng)) {
            out.branch = Branch::kCb;
            out.policy = cb_ps_plan(rewards_, horizon_, rng);
        } else {
            out.branch = Branch::kMdp;
            ExogenousModel exo{dynamics_, learn_exogenous_ ? &exo_counts_ : nullptr, exo_alpha_};
            out.policy = factored_mdp_ps_plan(rewards_, endo_counts_, alpha_, dynamics_->layout, exo, horizon_, rng);
        }
        return out;
    }

    void observe(const EpisodeRecord& episode) override {
        const FactoredLayout& layout = dynamics_->layout;
        for (const Step& step : episode.steps) {
            rewards_.stats.add(step.state, step.action, step.reward);
            endo_counts_.add(layout.endo_of(step.state), step.action, layout.endo_of(step.next_state));
            exo_counts_.add(layout.exo_joint_of(step.state), 0, layout.exo_joint_of(step.next_state));
        }
    }

private:
    const FactoredDynamics* dynamics_;
    int horizon_;
    std::vector<double> alpha_;
    double prior_h0_;
    bool learn_exogenous_;
    double exo_alpha_;
    NormalRewardPosterior rewards_;
    TransitionCounts endo_counts_;
    TransitionCounts exo_counts_;
};

class OptimalAgent final : public Agent {
public:
    explicit OptimalAgent(const MdpModel& truth) : policy_(backward_induction(truth).policy) {}
    PlanOutcome plan_episode(Rng&) const override { return {policy_, {}, {}}; }
    void observe(const EpisodeRecord&) override {}

private:
    Policy policy_;
};

}  // namespace

std::unique_ptr<Agent> make_cb_ps_agent(const MdpModel& shape, const AgentOptions& options) {
    return std::make_unique<CbPsAgent>(shape, options);
}

std::unique_ptr<Agent> make_mdp_ps_agent(const MdpModel& shape, const AgentOptions& options) {
    return std::make_unique<MdpPsAgent>(shape, options);
}

std::unique_ptr<Agent> make_bht_agent(const MdpModel& shape, const AgentOptions& options) {
    if (!(options.prior_h0 >= 0.0 && options.prior_h0 <= 1.0)) throw DomainError("agent: prior_h0 must lie in [0, 1]");
    return std::make_unique<BhtAgent>(shape, options);
}

std::unique_ptr<Agent> make_factored_bht_agent(const Environment& env, const AgentOptions& options) {
    if (!env.factored) throw ContractError("factored agent: environment has no factored structure");
    if (!(options.prior_h0 >= 0.0 && options.prior_h0 <= 1.0)) throw DomainError("agent: prior_h0 must lie in [0, 1]");
    return std::make_unique<FactoredBhtAgent>(env, options);
}

std::unique_ptr<Agent> make_optimal_agent(const MdpModel& truth) { return std::make_unique<OptimalAgent>(truth); }

}  // namespace bhtrl
