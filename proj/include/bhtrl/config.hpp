#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhtrl/envs.hpp"

namespace bhtrl {

/// Invalid experiment configuration. `field()` is the dotted path of the
/// offending entry, e.g. "agents[1].prior_h0".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class EnvFamily { kRiverSwim, kRiverSwimCb, kMobileHealth, kRandomMdp };

struct EnvSpec {
    EnvFamily family = EnvFamily::kRiverSwim;
    std::optional<double> lambda;
    RiverSwimConfig riverswim;
    MobileHealthConfig mobile_health;
    RandomMdpConfig random_mdp;
};

enum class AgentKind { kCbPs, kMdpPs, kBhtRl, kBhtRlFactored, kOptimal };

struct AgentSpec {
    AgentKind kind = AgentKind::kCbPs;
    std::string name;
    std::vector<double> alpha{1.0};  // one entry: scalar replicated to the alphabet
    double prior_h0 = 0.5;
    double reward_prior_mean = 1.0;
    double reward_prior_var = 1.0;
    bool known_noise = true;
    double assumed_noise_var = 1.0;  // used only when known_noise is false
    bool learn_exogenous = false;
    double exo_alpha = 1.0;
};

struct OutputSpec {
    std::string directory = "out";
    bool records = true;
    bool summary = true;
    bool model = false;
};

struct ExperimentConfig {
    EnvSpec env;
    int horizon = 20;
    int episodes = 100;
    int repetitions = 10;
    std::uint64_t master_seed = 0;
    std::vector<AgentSpec> agents;
    OutputSpec output;
};

/// Parses and validates a JSON config document. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-checks cross-field invariants; parse_config calls this.
void validate(const ExperimentConfig& config);

std::string to_string(EnvFamily family);
std::string to_string(AgentKind kind);

}  // namespace bhtrl
