#pragma once

#include <vector>

#include "bhtrl/core.hpp"

namespace bhtrl {

/// V[s][h] for h = 0..H, where layer H is the all-zero terminal layer.
struct ValueTable {
    int num_states = 0;
    int horizon = 0;
    std::vector<double> values;  // S * (H + 1), index s * (H + 1) + h

    ValueTable() = default;
    ValueTable(int states, int horizon_steps)
        : num_states(states), horizon(horizon_steps), values(static_cast<std::size_t>(states) * (horizon_steps + 1), 0.0) {}

    double& at(int s, int h) { return values[static_cast<std::size_t>(s) * (horizon + 1) + h]; }
    double at(int s, int h) const { return values[static_cast<std::size_t>(s) * (horizon + 1) + h]; }
};

struct PlanResult {
    Policy policy;
    ValueTable values;
};

/// Optimal finite-horizon policy by dynamic programming. Ties go to the
/// lowest action index.
PlanResult backward_induction(const MdpModel& model);

/// Exact value of a deterministic step-indexed policy.
ValueTable evaluate_policy(const MdpModel& model, const Policy& policy);

/// sum_s rho(s) (V*[s][0] - V_pi[s][0]).
double per_episode_regret(const MdpModel& model, const ValueTable& v_star, const Policy& policy);

/// sum_s rho(s) V[s][0].
double start_value(const MdpModel& model, const ValueTable& values);

}  // namespace bhtrl
