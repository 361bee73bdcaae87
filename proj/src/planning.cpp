#include "bhtrl/planning.hpp"

namespace bhtrl {

namespace {

double expected_next(const MdpModel& model, int s, int a, const ValueTable& v, int next_h) {
    const auto row = model.row(s, a);
    double total = 0.0;
    for (int next = 0; next < model.num_states; ++next) total += row[next] * v.at(next, next_h);
    return total;
}

}  // namespace

PlanResult backward_induction(const MdpModel& model) {
    PlanResult out{Policy(model.num_states, model.horizon), ValueTable(model.num_states, model.horizon)};
    for (int h = model.horizon - 1; h >= 0; --h) {
        for (int s = 0; s < model.num_states; ++s) {
            int best_action = 0;
            double best = model.r(s, 0) + expected_next(model, s, 0, out.values, h + 1);
            for (int a = 1; a < model.num_actions; ++a) {
                const double q = model.r(s, a) + expected_next(model, s, a, out.values, h + 1);
                if (q > best) {
                    best = q;
                    best_action = a;
                }
            }
            out.values.at(s, h) = best;
            out.policy.at(s, h) = best_action;
        }
    }
    return out;
}

ValueTable evaluate_policy(const MdpModel& model, const Policy& policy) {
    if (policy.num_states != model.num_states || policy.horizon != model.horizon)
        throw ContractError("evaluate_policy: policy dimensions do not match the model");
    ValueTable v(model.num_states, model.horizon);
    for (int h = model.horizon - 1; h >= 0; --h) {
        for (int s = 0; s < model.num_states; ++s) {
            const int a = policy.at(s, h);
            if (a < 0 || a >= model.num_actions) throw ContractError("evaluate_policy: action out of range");
            v.at(s, h) = model.r(s, a) + expected_next(model, s, a, v, h + 1);
        }
    }
    return v;
}

double start_value(const MdpModel& model, const ValueTable& values) {
    double total = 0.0;
    for (int s = 0; s < model.num_states; ++s) total += model.start_dist[s] * values.at(s, 0);
    return total;
}

double per_episode_regret(const MdpModel& model, const ValueTable& v_star, const Policy& policy) {
    const ValueTable v = evaluate_policy(model, policy);
    double total = 0.0;
    for (int s = 0; s < model.num_states; ++s) total += model.start_dist[s] * (v_star.at(s, 0) - v.at(s, 0));
    return total;
}

}  // namespace bhtrl
