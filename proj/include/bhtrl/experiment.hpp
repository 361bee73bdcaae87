#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bhtrl/agents.hpp"
#include "bhtrl/config.hpp"
#include "bhtrl/planning.hpp"

namespace bhtrl {

struct RunRecord {
    int rep = 0;
    int episode = 0;  // 0-based
    std::string agent;
    double episode_regret = 0.0;
    double cumulative_regret = 0.0;
    std::optional<double> p_h0;
    std::optional<Branch> branch;

    bool operator==(const RunRecord&) const = default;
};

/// Stream seeding a repetition's environment draws. Tagged separately from
/// the agent streams so the agent list never perturbs environment draws.
Rng environment_stream(std::uint64_t master_seed, int rep);

/// Agent stream: derive_stream(master_seed, rep * (num_agents + 1) + slot).
Rng agent_stream(std::uint64_t master_seed, int rep, int num_agents, int slot);

/// Builds the repetition's environment. Random MDPs draw from `rng`; lambda
/// interpolates the family's CB and MDP variants.
Environment build_environment(const EnvSpec& spec, int horizon, Rng& rng);

/// Instantiates an agent for `env`, expanding a scalar alpha to the tested
/// alphabet and resolving the observation variance.
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const Environment& env, int slot);

/// K episodes of plan -> simulate -> regret -> observe on one stream.
std::vector<RunRecord> run_agent(const MdpModel& truth, const ValueTable& v_star, Agent& agent, Rng& rng,
                                 int episodes, int rep, const std::string& name);

/// All agents of one repetition, in config order.
std::vector<std::vector<RunRecord>> run_repetition(const ExperimentConfig& config, int rep);

/// Repetitions run concurrently under OpenMP (capped by BHT_THREADS when
/// set). Output is ordered by (agent slot, rep, episode) and identical to
/// run_experiment_serial.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int threads);

/// Single-threaded reference path.
std::vector<RunRecord> run_experiment_serial(const ExperimentConfig& config);

/// Worker count from BHT_THREADS (0 or unset: runtime default).
int configured_threads();

struct SummaryRow {
    std::string agent;
    int episode = 0;
    int reps = 0;
    double cumulative_regret_mean = 0.0;
    double cumulative_regret_se = 0.0;
    std::optional<double> p_h0_mean;
    std::optional<double> p_h0_se;
};

/// Per (agent, episode) mean and standard error (sample stddev / sqrt(reps),
/// 0 for a single repetition). Agents keep their first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

}  // namespace bhtrl
