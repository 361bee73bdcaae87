#pragma once

#include <optional>
#include <vector>

#include "bhtrl/core.hpp"

namespace bhtrl {

namespace riverswim {
inline constexpr int kLeft = 0;
inline constexpr int kRight = 1;
}  // namespace riverswim

/// River chain. Every probability lives here so variants can be configured
/// without code changes; the defaults are the common parameterization.
struct RiverSwimConfig {
    int num_states = 6;
    double left_success = 1.0;  // P(move left) under LEFT; remainder stays
    double right_advance = 0.3;
    double right_stay = 0.6;
    double right_retreat = 0.1;
    double first_advance = 0.3;  // RIGHT at the leftmost state
    double first_stay = 0.7;
    double last_stay = 0.9;  // RIGHT at the rightmost state
    double last_retreat = 0.1;
    double reward_left_nest = 0.005;
    double reward_right_nest = 1.0;
    double reward_noise_var = 0.01;
    std::vector<double> start_dist;  // empty: start at state 0
};

MdpModel build_riverswim(const RiverSwimConfig& config, int horizon);
MdpModel build_riverswim_cb(const RiverSwimConfig& config, int horizon);

/// Exogenous/endogenous transition factors of a factored environment.
/// P(s'|s,a) = exo[x][x'] * endo[a][z][z'] under the layout's encoding.
struct FactoredDynamics {
    FactoredLayout layout;
    int num_actions = 0;
    std::vector<double> exo_transition;   // X * X, joint exogenous index
    std::vector<double> endo_transition;  // A * Z * Z

    double exo(int x, int next_x) const {
        return exo_transition[static_cast<std::size_t>(x) * layout.exo_size() + next_x];
    }
    double endo(int a, int z, int next_z) const {
        const auto Z = static_cast<std::size_t>(layout.endo_size);
        return endo_transition[(static_cast<std::size_t>(a) * Z + z) * Z + next_z];
    }
};

/// Flat S*A*S tensor implied by the factors.
std::vector<double> compose_transitions(const FactoredDynamics& dynamics);

/// A model together with its factor structure when it has one.
struct Environment {
    MdpModel model;
    std::optional<FactoredDynamics> factored;
};

/// Mobile-health activity-suggestion environment.
///
/// Factors, in encoding order: time of day (Morning, Afternoon, Evening),
/// weather (Fair, Poor), then the endogenous pair encoded as
/// z = 2 * engagement + goal with engagement (Disengaged, Engaged) and goal
/// (Missed, Met). Action 1 sends a message.
struct MobileHealthConfig {
    bool bandit_variant = false;
    double reward_noise_var = 0.01;
    std::vector<double> start_dist;  // empty: uniform over the 24 states
};

Environment build_mobile_health(const MobileHealthConfig& config, int horizon);

struct RandomMdpConfig {
    int num_states = 10;
    int num_actions = 2;
    int nonzero_entries_per_row = 5;
    double reward_noise_var = 0.01;
};

/// Sparse random MDP: each row gets k distinct supported next states chosen by
/// a partial Fisher-Yates shuffle, Uniform(0,1] weights, normalized. All rows
/// are drawn first, in (s, a) order, then the Uniform(0,1) mean rewards.
MdpModel build_random_mdp(const RandomMdpConfig& config, int horizon, Rng& rng);

/// Copies the action-0 transition rows onto every other action.
MdpModel make_bandit_by_action_copy(const MdpModel& model);

/// (1 - lambda) * cb + lambda * mdp on the transition tensor.
MdpModel interpolate(const MdpModel& cb, const MdpModel& mdp, double lambda);

/// Factor-level version: only the endogenous factor is interpolated. The
/// exogenous factors of both inputs must agree.
Environment interpolate(const Environment& cb, const Environment& mdp, double lambda);

/// max over s, s', a, a' of |P(s'|s,a) - P(s'|s,a')|.
double max_action_variation(const MdpModel& model);

}  // namespace bhtrl
