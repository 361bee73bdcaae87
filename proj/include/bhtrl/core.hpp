#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bhtrl/mathstats.hpp"

namespace bhtrl {

/// Complete tabular episodic environment.
///
/// Transitions are stored flat in [s][a][s'] order and rewards in [s][a]
/// order. All indices are dense and 0-based. Instances are immutable once
/// validated and may be shared across threads.
struct MdpModel {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    std::vector<double> transitions;  // S * A * S
    std::vector<double> reward_mean;  // S * A
    double reward_noise_var = 0.0;
    std::vector<double> start_dist;  // S

    MdpModel() = default;
    MdpModel(int states, int actions, int horizon_steps);

    std::size_t row_offset(int s, int a) const {
        return (static_cast<std::size_t>(s) * num_actions + a) * num_states;
    }
    double& p(int s, int a, int next) { return transitions[row_offset(s, a) + next]; }
    double p(int s, int a, int next) const { return transitions[row_offset(s, a) + next]; }
    std::span<double> row(int s, int a) { return {transitions.data() + row_offset(s, a), static_cast<std::size_t>(num_states)}; }
    std::span<const double> row(int s, int a) const {
        return {transitions.data() + row_offset(s, a), static_cast<std::size_t>(num_states)};
    }
    double& r(int s, int a) { return reward_mean[static_cast<std::size_t>(s) * num_actions + a]; }
    double r(int s, int a) const { return reward_mean[static_cast<std::size_t>(s) * num_actions + a]; }
};

/// Checks every MdpModel invariant (row sums and start distribution within
/// 1e-9, nonnegative entries, finite rewards, H >= 1). Throws ContractError.
void validate(const MdpModel& model);

/// Flat-state encoding for S = X_1 x ... x X_n x Z.
///
/// Mixed radix with the exogenous factors as the most significant digits and
/// the endogenous component as the least significant digit:
///   flat = ((x_1 * |X_2| + x_2) * ... ) * |Z| + z.
struct FactoredLayout {
    std::vector<int> exo_factor_sizes;
    int endo_size = 1;

    int exo_size() const;
    int num_states() const { return exo_size() * endo_size; }
    int encode(std::span<const int> exo, int endo) const;
    int encode_joint(int exo_joint, int endo) const { return exo_joint * endo_size + endo; }
    int exo_joint_of(int flat) const { return flat / endo_size; }
    int endo_of(int flat) const { return flat % endo_size; }
    std::vector<int> decode_exo(int flat) const;
};

/// Deterministic policy pi[s][h], h in [0, H) (step h here is step h+1 of
/// the episode in 1-based notation).
struct Policy {
    int num_states = 0;
    int horizon = 0;
    std::vector<int> action;  // S * H, index s * H + h

    Policy() = default;
    Policy(int states, int horizon_steps, int fill = 0);

    int& at(int s, int h) { return action[static_cast<std::size_t>(s) * horizon + h]; }
    int at(int s, int h) const { return action[static_cast<std::size_t>(s) * horizon + h]; }
    bool operator==(const Policy&) const = default;
};

struct Step {
    int state = 0;
    int action = 0;
    double reward = 0.0;
    int next_state = 0;
};

struct EpisodeRecord {
    std::vector<Step> steps;
};

/// N[s][a][s'] counts. Tied counts N_s = sum_a N[s][a] are derived on demand.
class TransitionCounts {
public:
    TransitionCounts() = default;
    TransitionCounts(int states, int actions, int next_states);

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    int num_next() const { return num_next_; }

    std::span<const long long> row(int s, int a) const {
        return {counts_.data() + offset(s, a), static_cast<std::size_t>(num_next_)};
    }
    long long at(int s, int a, int next) const { return counts_[offset(s, a) + next]; }
    void add(int s, int a, int next, long long n = 1);
    std::vector<long long> tied_row(int s) const;
    long long total() const;

private:
    std::size_t offset(int s, int a) const {
        return (static_cast<std::size_t>(s) * num_actions_ + a) * num_next_;
    }
    int num_states_ = 0;
    int num_actions_ = 0;
    int num_next_ = 0;
    std::vector<long long> counts_;
};

/// Per-(s,a) sufficient statistics for Normal rewards.
class RewardStats {
public:
    RewardStats() = default;
    RewardStats(int states, int actions);

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    long long count(int s, int a) const { return n_[index(s, a)]; }
    double sum(int s, int a) const { return sum_[index(s, a)]; }
    void add(int s, int a, double reward);

private:
    std::size_t index(int s, int a) const { return static_cast<std::size_t>(s) * num_actions_ + a; }
    int num_states_ = 0;
    int num_actions_ = 0;
    std::vector<long long> n_;
    std::vector<double> sum_;
};

EpisodeRecord simulate_episode(const MdpModel& model, const Policy& policy, Rng& rng);

/// Ingests one episode: H transition increments (the final next_state
/// included) and H rewards.
void update_counts(TransitionCounts& counts, RewardStats& stats, const EpisodeRecord& episode);

}  // namespace bhtrl
