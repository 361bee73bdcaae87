#include "bhtrl/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bhtrl {

namespace {

void check_probability(double p, const char* field) {
    if (!(p >= 0.0 && p <= 1.0)) throw ContractError(std::string("riverswim: ") + field + " must lie in [0, 1]");
}

void check_row_sum(double total, const char* which) {
    if (std::abs(total - 1.0) > 1e-9) throw ContractError(std::string("riverswim: ") + which + " probabilities must sum to 1");
}

void fill_start(MdpModel& model, const std::vector<double>& configured, bool uniform_default) {
    if (configured.empty()) {
        if (uniform_default) {
            std::fill(model.start_dist.begin(), model.start_dist.end(), 1.0 / model.num_states);
        } else {
            model.start_dist[0] = 1.0;
        }
        return;
    }
    if (static_cast<int>(configured.size()) != model.num_states)
        throw ContractError("start_dist: length must equal the number of states");
    model.start_dist = configured;
}

MdpModel riverswim_shell(const RiverSwimConfig& c, int horizon) {
    if (c.num_states < 2) throw ContractError("riverswim: need at least two states");
    check_probability(c.left_success, "left_success");
    for (double p : {c.right_advance, c.right_stay, c.right_retreat, c.first_advance, c.first_stay, c.last_stay,
                     c.last_retreat})
        check_probability(p, "right-action probability");
    check_row_sum(c.right_advance + c.right_stay + c.right_retreat, "interior RIGHT");
    check_row_sum(c.first_advance + c.first_stay, "leftmost RIGHT");
    check_row_sum(c.last_stay + c.last_retreat, "rightmost RIGHT");
    if (!(c.reward_noise_var >= 0.0)) throw ContractError("riverswim: reward_noise_var must be nonnegative");

    MdpModel m(c.num_states, 2, horizon);
    m.reward_noise_var = c.reward_noise_var;
    m.r(0, riverswim::kLeft) = c.reward_left_nest;
    m.r(c.num_states - 1, riverswim::kRight) = c.reward_right_nest;
    fill_start(m, c.start_dist, false);
    return m;
}

}  // namespace

MdpModel build_riverswim(const RiverSwimConfig& c, int horizon) {
    MdpModel m = riverswim_shell(c, horizon);
    using namespace riverswim;
    const int last = c.num_states - 1;
    for (int s = 0; s < c.num_states; ++s) {
        const int left = s > 0 ? s - 1 : 0;
        m.p(s, kLeft, left) += c.left_success;
        m.p(s, kLeft, s) += 1.0 - c.left_success;
        if (s == 0) {
            m.p(s, kRight, 1) += c.first_advance;
            m.p(s, kRight, 0) += c.first_stay;
        } else if (s == last) {
            m.p(s, kRight, s) += c.last_stay;
            m.p(s, kRight, s - 1) += c.last_retreat;
        } else {
            m.p(s, kRight, s + 1) += c.right_advance;
            m.p(s, kRight, s) += c.right_stay;
            m.p(s, kRight, s - 1) += c.right_retreat;
        }
    }
    validate(m);
    return m;
}

MdpModel build_riverswim_cb(const RiverSwimConfig& c, int horizon) {
    MdpModel m = riverswim_shell(c, horizon);
    std::fill(m.transitions.begin(), m.transitions.end(), 1.0 / c.num_states);
    validate(m);
    return m;
}

std::vector<double> compose_transitions(const FactoredDynamics& d) {
    const int X = d.layout.exo_size();
    const int Z = d.layout.endo_size;
    const int S = X * Z;
    const int A = d.num_actions;
    std::vector<double> flat(static_cast<std::size_t>(S) * A * S, 0.0);
    for (int s = 0; s < S; ++s) {
        const int x = d.layout.exo_joint_of(s);
        const int z = d.layout.endo_of(s);
        for (int a = 0; a < A; ++a) {
            double* row = flat.data() + (static_cast<std::size_t>(s) * A + a) * S;
            for (int nx = 0; nx < X; ++nx) {
                const double px = d.exo(x, nx);
                for (int nz = 0; nz < Z; ++nz) row[d.layout.encode_joint(nx, nz)] = px * d.endo(a, z, nz);
            }
        }
    }
    return flat;
}

namespace {

// Rows: time of day, weather, endogenous z = 2 * engagement + goal.
constexpr double kTimeTransition[3][3] = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
constexpr double kWeatherTransition[2][2] = {{0.6, 0.4}, {0.3, 0.7}};
constexpr double kEndoNoMessage[4][4] = {
    {0.45, 0.35, 0.1, 0.1},
    {0.5, 0.3, 0.15, 0.05},
    {0.05, 0.3, 0.3, 0.35},
    {0.05, 0.05, 0.35, 0.55},
};
constexpr double kEndoMessage[4][4] = {
    {0.35, 0.35, 0.15, 0.15},
    {0.4, 0.25, 0.2, 0.15},
    {0.2, 0.25, 0.3, 0.25},
    {0.15, 0.15, 0.3, 0.4},
};

// Reward coefficients indexed [action][level].
constexpr double kThetaTime[2][3] = {{0.001, 0.01, 0.005}, {0.001, 0.02, 0.01}};
constexpr double kThetaWeather[2][2] = {{0.01, 0.015}, {0.01, 0.025}};
constexpr double kThetaEndo[2][4] = {{0.005, 0.4, 0.35, 2.25}, {0.01, 0.405, 1.75, 2.5}};

}  // namespace

Environment build_mobile_health(const MobileHealthConfig& config, int horizon) {
    FactoredDynamics d;
    d.layout.exo_factor_sizes = {3, 2};
    d.layout.endo_size = 4;
    d.num_actions = 2;
    d.exo_transition.assign(36, 0.0);
    for (int t = 0; t < 3; ++t)
        for (int w = 0; w < 2; ++w)
            for (int nt = 0; nt < 3; ++nt)
                for (int nw = 0; nw < 2; ++nw)
                    d.exo_transition[static_cast<std::size_t>(t * 2 + w) * 6 + (nt * 2 + nw)] =
                        kTimeTransition[t][nt] * kWeatherTransition[w][nw];
    d.endo_transition.assign(2 * 16, 0.0);
    for (int z = 0; z < 4; ++z) {
        for (int nz = 0; nz < 4; ++nz) {
            d.endo_transition[static_cast<std::size_t>(0 * 16 + z * 4 + nz)] = kEndoNoMessage[z][nz];
            d.endo_transition[static_cast<std::size_t>(1 * 16 + z * 4 + nz)] =
                config.bandit_variant ? kEndoNoMessage[z][nz] : kEndoMessage[z][nz];
        }
    }

    Environment env;
    MdpModel& m = env.model;
    m = MdpModel(24, 2, horizon);
    m.transitions = compose_transitions(d);
    m.reward_noise_var = config.reward_noise_var;
    for (int time = 0; time < 3; ++time) {
        for (int weather = 0; weather < 2; ++weather) {
            for (int z = 0; z < 4; ++z) {
                const int digits[2] = {time, weather};
                const int s = d.layout.encode(digits, z);
                for (int a = 0; a < 2; ++a)
                    m.r(s, a) = kThetaTime[a][time] + kThetaWeather[a][weather] + kThetaEndo[a][z];
            }
        }
    }
    fill_start(m, config.start_dist, true);
    validate(m);
    env.factored = std::move(d);
    return env;
}

MdpModel build_random_mdp(const RandomMdpConfig& c, int horizon, Rng& rng) {
    if (c.num_states < 1 || c.num_actions < 1) throw ContractError("random_mdp: num_states and num_actions must be positive");
    if (c.nonzero_entries_per_row < 1 || c.nonzero_entries_per_row > c.num_states)
        throw ContractError("random_mdp: nonzero_entries_per_row must lie in [1, num_states]");
    MdpModel m(c.num_states, c.num_actions, horizon);
    m.reward_noise_var = c.reward_noise_var;
    std::vector<int> support(static_cast<std::size_t>(c.num_states));
    for (int s = 0; s < c.num_states; ++s) {
        for (int a = 0; a < c.num_actions; ++a) {
            std::iota(support.begin(), support.end(), 0);
            for (int i = 0; i < c.nonzero_entries_per_row; ++i) {
                const auto j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.num_states - i)));
                std::swap(support[i], support[j]);
            }
            auto row = m.row(s, a);
            double total = 0.0;
            for (int i = 0; i < c.nonzero_entries_per_row; ++i) {
                const double w = 1.0 - rng.uniform01();  // (0, 1]
                row[support[i]] = w;
                total += w;
            }
            for (double& p : row) p /= total;
        }
    }
    for (double& r : m.reward_mean) r = rng.uniform01();
    std::fill(m.start_dist.begin(), m.start_dist.end(), 1.0 / c.num_states);
    validate(m);
    return m;
}

MdpModel make_bandit_by_action_copy(const MdpModel& model) {
    MdpModel out = model;
    for (int s = 0; s < model.num_states; ++s) {
        const auto base = model.row(s, 0);
        for (int a = 1; a < model.num_actions; ++a) std::copy(base.begin(), base.end(), out.row(s, a).begin());
    }
    return out;
}

MdpModel interpolate(const MdpModel& cb, const MdpModel& mdp, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("interpolate: lambda must lie in [0, 1]");
    if (cb.num_states != mdp.num_states || cb.num_actions != mdp.num_actions || cb.horizon != mdp.horizon)
        throw ContractError("interpolate: model shapes differ");
    if (cb.reward_mean != mdp.reward_mean) throw ContractError("interpolate: reward tables differ");
    if (cb.start_dist != mdp.start_dist) throw ContractError("interpolate: start distributions differ");
    if (cb.reward_noise_var != mdp.reward_noise_var) throw ContractError("interpolate: reward noise differs");
    MdpModel out = mdp;
    if (lambda == 1.0) return out;
    if (lambda == 0.0) {
        out.transitions = cb.transitions;
        return out;
    }
    for (std::size_t i = 0; i < out.transitions.size(); ++i)
        out.transitions[i] = (1.0 - lambda) * cb.transitions[i] + lambda * mdp.transitions[i];
    return out;
}

Environment interpolate(const Environment& cb, const Environment& mdp, double lambda) {
    if (!cb.factored || !mdp.factored) {
        if (cb.factored || mdp.factored) throw ContractError("interpolate: only one input is factored");
        return Environment{interpolate(cb.model, mdp.model, lambda), std::nullopt};
    }
    // Validates shapes, rewards and lambda on the flat models.
    Environment out{interpolate(cb.model, mdp.model, lambda), mdp.factored};
    const FactoredDynamics& fc = *cb.factored;
    const FactoredDynamics& fm = *mdp.factored;
    if (fc.layout.exo_factor_sizes != fm.layout.exo_factor_sizes || fc.layout.endo_size != fm.layout.endo_size ||
        fc.exo_transition != fm.exo_transition)
        throw ContractError("interpolate: exogenous factors differ");
    FactoredDynamics& f = *out.factored;
    if (lambda == 0.0) {
        f.endo_transition = fc.endo_transition;
    } else if (lambda < 1.0) {
        for (std::size_t i = 0; i < f.endo_transition.size(); ++i)
            f.endo_transition[i] = (1.0 - lambda) * fc.endo_transition[i] + lambda * fm.endo_transition[i];
    }
    out.model.transitions = compose_transitions(f);
    return out;
}

double max_action_variation(const MdpModel& model) {
    double best = 0.0;
    for (int s = 0; s < model.num_states; ++s)
        for (int a = 0; a < model.num_actions; ++a)
            for (int b = a + 1; b < model.num_actions; ++b)
                for (int next = 0; next < model.num_states; ++next)
                    best = std::max(best, std::abs(model.p(s, a, next) - model.p(s, b, next)));
    return best;
}

}  // namespace bhtrl
