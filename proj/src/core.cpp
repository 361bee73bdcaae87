#include "bhtrl/core.hpp"

#include <cmath>
#include <string>

namespace bhtrl {

MdpModel::MdpModel(int states, int actions, int horizon_steps)
    : num_states(states),
      num_actions(actions),
      horizon(horizon_steps),
      transitions(static_cast<std::size_t>(states) * actions * states, 0.0),
      reward_mean(static_cast<std::size_t>(states) * actions, 0.0),
      start_dist(static_cast<std::size_t>(states), 0.0) {
    if (states <= 0 || actions <= 0 || horizon_steps <= 0)
        throw ContractError("MdpModel: S, A and H must be positive");
}

void validate(const MdpModel& m) {
    if (m.num_states <= 0 || m.num_actions <= 0) throw ContractError("MdpModel: S and A must be positive");
    if (m.horizon < 1) throw ContractError("MdpModel: horizon must be at least 1");
    const auto S = static_cast<std::size_t>(m.num_states);
    const auto A = static_cast<std::size_t>(m.num_actions);
    if (m.transitions.size() != S * A * S || m.reward_mean.size() != S * A || m.start_dist.size() != S)
        throw ContractError("MdpModel: table sizes do not match S and A");
    for (int s = 0; s < m.num_states; ++s) {
        for (int a = 0; a < m.num_actions; ++a) {
            double total = 0.0;
            for (double p : m.row(s, a)) {
                if (!(p >= 0.0)) throw ContractError("MdpModel: negative transition probability");
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw ContractError("MdpModel: transition row (" + std::to_string(s) + ", " + std::to_string(a) +
                                    ") does not sum to 1");
            if (!std::isfinite(m.r(s, a))) throw ContractError("MdpModel: non-finite reward");
        }
    }
    double total = 0.0;
    for (double p : m.start_dist) {
        if (!(p >= 0.0)) throw ContractError("MdpModel: negative start probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ContractError("MdpModel: start distribution does not sum to 1");
    if (!(m.reward_noise_var >= 0.0)) throw ContractError("MdpModel: negative reward noise variance");
}

int FactoredLayout::exo_size() const {
    int n = 1;
    for (int k : exo_factor_sizes) n *= k;
    return n;
}

int FactoredLayout::encode(std::span<const int> exo, int endo) const {
    if (exo.size() != exo_factor_sizes.size()) throw ContractError("FactoredLayout: wrong number of exogenous digits");
    int joint = 0;
    for (std::size_t i = 0; i < exo.size(); ++i) {
        if (exo[i] < 0 || exo[i] >= exo_factor_sizes[i]) throw ContractError("FactoredLayout: digit out of range");
        joint = joint * exo_factor_sizes[i] + exo[i];
    }
    if (endo < 0 || endo >= endo_size) throw ContractError("FactoredLayout: endogenous index out of range");
    return encode_joint(joint, endo);
}

std::vector<int> FactoredLayout::decode_exo(int flat) const {
    int joint = exo_joint_of(flat);
    std::vector<int> digits(exo_factor_sizes.size());
    for (std::size_t i = digits.size(); i-- > 0;) {
        digits[i] = joint % exo_factor_sizes[i];
        joint /= exo_factor_sizes[i];
    }
    return digits;
}

Policy::Policy(int states, int horizon_steps, int fill)
    : num_states(states), horizon(horizon_steps), action(static_cast<std::size_t>(states) * horizon_steps, fill) {}

TransitionCounts::TransitionCounts(int states, int actions, int next_states)
    : num_states_(states),
      num_actions_(actions),
      num_next_(next_states),
      counts_(static_cast<std::size_t>(states) * actions * next_states, 0) {}

void TransitionCounts::add(int s, int a, int next, long long n) {
    if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_ || next < 0 || next >= num_next_)
        throw ContractError("TransitionCounts: index out of range");
    counts_[offset(s, a) + next] += n;
}

std::vector<long long> TransitionCounts::tied_row(int s) const {
    std::vector<long long> tied(static_cast<std::size_t>(num_next_), 0);
    for (int a = 0; a < num_actions_; ++a) {
        const auto r = row(s, a);
        for (int j = 0; j < num_next_; ++j) tied[j] += r[j];
    }
    return tied;
}

long long TransitionCounts::total() const {
    long long t = 0;
    for (long long c : counts_) t += c;
    return t;
}

RewardStats::RewardStats(int states, int actions)
    : num_states_(states),
      num_actions_(actions),
      n_(static_cast<std::size_t>(states) * actions, 0),
      sum_(static_cast<std::size_t>(states) * actions, 0.0) {}

void RewardStats::add(int s, int a, double reward) {
    if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_) throw ContractError("RewardStats: index out of range");
    n_[index(s, a)] += 1;
    sum_[index(s, a)] += reward;
}

EpisodeRecord simulate_episode(const MdpModel& model, const Policy& policy, Rng& rng) {
    if (policy.num_states != model.num_states || policy.horizon != model.horizon)
        throw ContractError("simulate_episode: policy dimensions do not match the model");
    EpisodeRecord episode;
    episode.steps.reserve(static_cast<std::size_t>(model.horizon));
    int s = sample_categorical(model.start_dist, rng);
    for (int h = 0; h < model.horizon; ++h) {
        const int a = policy.at(s, h);
        if (a < 0 || a >= model.num_actions) throw ContractError("simulate_episode: policy action out of range");
        const double reward = sample_normal(model.r(s, a), model.reward_noise_var, rng);
        const int next = sample_categorical(model.row(s, a), rng);
        episode.steps.push_back({s, a, reward, next});
        s = next;
    }
    return episode;
}

void update_counts(TransitionCounts& counts, RewardStats& stats, const EpisodeRecord& episode) {
    for (const Step& step : episode.steps) {
        if (step.state < 0 || step.state >= stats.num_states() || step.action < 0 ||
            step.action >= stats.num_actions() || step.next_state < 0 || step.next_state >= counts.num_next())
            throw ContractError("update_counts: step index out of range");
    }
    for (const Step& step : episode.steps) {
        counts.add(step.state, step.action, step.next_state);
        stats.add(step.state, step.action, step.reward);
    }
}

}  // namespace bhtrl
