#include "bhtrl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bhtrl {

namespace {
constexpr std::uint64_t kEnvironmentTag = 0x656E7669726F6E6DULL;  // "environm"
}

Rng environment_stream(std::uint64_t master_seed, int rep) {
    return derive_stream(mix64(master_seed ^ kEnvironmentTag), static_cast<std::uint64_t>(rep));
}

Rng agent_stream(std::uint64_t master_seed, int rep, int num_agents, int slot) {
    const auto index = static_cast<std::uint64_t>(rep) * static_cast<std::uint64_t>(num_agents + 1) +
                       static_cast<std::uint64_t>(slot);
    return derive_stream(master_seed, index);
}

Environment build_environment(const EnvSpec& spec, int horizon, Rng& rng) {
    try {
        switch (spec.family) {
            case EnvFamily::kRiverSwim: {
                MdpModel mdp = build_riverswim(spec.riverswim, horizon);
                if (!spec.lambda) return {std::move(mdp), std::nullopt};
                return {interpolate(build_riverswim_cb(spec.riverswim, horizon), mdp, *spec.lambda), std::nullopt};
            }
            case EnvFamily::kRiverSwimCb:
                return {build_riverswim_cb(spec.riverswim, horizon), std::nullopt};
            case EnvFamily::kMobileHealth: {
                if (!spec.lambda) return build_mobile_health(spec.mobile_health, horizon);
                MobileHealthConfig cb_config = spec.mobile_health;
                cb_config.bandit_variant = true;
                MobileHealthConfig mdp_config = spec.mobile_health;
                mdp_config.bandit_variant = false;
                return interpolate(build_mobile_health(cb_config, horizon), build_mobile_health(mdp_config, horizon),
                                   *spec.lambda);
            }
            case EnvFamily::kRandomMdp: {
                MdpModel mdp = build_random_mdp(spec.random_mdp, horizon, rng);
                if (!spec.lambda) return {std::move(mdp), std::nullopt};
                return {interpolate(make_bandit_by_action_copy(mdp), mdp, *spec.lambda), std::nullopt};
            }
        }
    } catch (const ContractError& e) {
        throw ConfigError("env", e.what());
    } catch (const DomainError& e) {
        throw ConfigError("env", e.what());
    }
    throw ConfigError("env.family", "unsupported family");
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const Environment& env, int slot) {
    const std::string path = "agents[" + std::to_string(slot) + "]";
    const MdpModel& model = env.model;
    if (spec.kind == AgentKind::kOptimal) return make_optimal_agent(model);

    AgentOptions o;
    o.reward_prior_mean = spec.reward_prior_mean;
    o.reward_prior_var = spec.reward_prior_var;
    o.prior_h0 = spec.prior_h0;
    o.learn_exogenous = spec.learn_exogenous;
    o.exo_alpha = spec.exo_alpha;
    if (spec.known_noise) {
        if (!(model.reward_noise_var > 0.0))
            throw ConfigError(path + ".known_noise", "environment reward noise is zero; set assumed_noise_var instead");
        o.obs_var = model.reward_noise_var;
    } else {
        o.obs_var = spec.assumed_noise_var;
    }

    const int alphabet = spec.kind == AgentKind::kBhtRlFactored ? env.factored->layout.endo_size : model.num_states;
    if (spec.alpha.size() == 1) {
        o.alpha.assign(static_cast<std::size_t>(alphabet), spec.alpha[0]);
    } else if (static_cast<int>(spec.alpha.size()) == alphabet) {
        o.alpha = spec.alpha;
    } else {
        throw ConfigError(path + ".alpha", "expected a scalar or " + std::to_string(alphabet) + " entries");
    }

    switch (spec.kind) {
        case AgentKind::kCbPs: return make_cb_ps_agent(model, o);
        case AgentKind::kMdpPs: return make_mdp_ps_agent(model, o);
        case AgentKind::kBhtRl: return make_bht_agent(model, o);
        case AgentKind::kBhtRlFactored: return make_factored_bht_agent(env, o);
        case AgentKind::kOptimal: break;
    }
    throw ConfigError(path + ".kind", "unsupported agent kind");
}

std::vector<RunRecord> run_agent(const MdpModel& truth, const ValueTable& v_star, Agent& agent, Rng& rng,
                                 int episodes, int rep, const std::string& name) {
    std::vector<RunRecord> out;
    out.reserve(static_cast<std::size_t>(episodes));
    double cumulative = 0.0;
    for (int k = 0; k < episodes; ++k) {
        PlanOutcome plan = agent.plan_episode(rng);
        const EpisodeRecord episode = simulate_episode(truth, plan.policy, rng);
        const double regret = per_episode_regret(truth, v_star, plan.policy);
        cumulative += regret;
        agent.observe(episode);
        out.push_back({rep, k, name, regret, cumulative, plan.p_h0, plan.branch});
    }
    return out;
}

std::vector<std::vector<RunRecord>> run_repetition(const ExperimentConfig& config, int rep) {
    Rng env_rng = environment_stream(config.master_seed, rep);
    const Environment env = build_environment(config.env, config.horizon, env_rng);
    const ValueTable v_star = backward_induction(env.model).values;
    const int num_agents = static_cast<int>(config.agents.size());
    std::vector<std::vector<RunRecord>> out(static_cast<std::size_t>(num_agents));
    for (int slot = 0; slot < num_agents; ++slot) {
        const AgentSpec& spec = config.agents[slot];
        std::unique_ptr<Agent> agent = make_agent(spec, env, slot);
        Rng rng = agent_stream(config.master_seed, rep, num_agents, slot);
        out[slot] = run_agent(env.model, v_star, *agent, rng, config.episodes, rep, spec.name);
    }
    return out;
}

namespace {

std::vector<RunRecord> flatten(std::vector<std::vector<std::vector<RunRecord>>>& by_rep, std::size_t num_agents) {
    std::vector<RunRecord> out;
    for (std::size_t slot = 0; slot < num_agents; ++slot)
        for (auto& rep : by_rep)
            for (RunRecord& r : rep[slot]) out.push_back(std::move(r));
    return out;
}

}  // namespace

int configured_threads() {
    const char* value = std::getenv("BHT_THREADS");
    if (value == nullptr || *value == '\0') return 0;
    char* end = nullptr;
    const long n = std::strtol(value, &end, 10);
    if (end == value || *end != '\0' || n < 0) return 0;
    return static_cast<int>(n);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
    return run_experiment(config, configured_threads());
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int threads) {
    validate(config);
    // Config errors surface before any worker starts.
    {
        Rng probe = environment_stream(config.master_seed, 0);
        const Environment env = build_environment(config.env, config.horizon, probe);
        for (std::size_t slot = 0; slot < config.agents.size(); ++slot)
            make_agent(config.agents[slot], env, static_cast<int>(slot));
    }
    const int reps = config.repetitions;
    std::vector<std::vector<std::vector<RunRecord>>> by_rep(static_cast<std::size_t>(reps));
#ifdef _OPENMP
    const int workers = threads > 0 ? threads : omp_get_max_threads();
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (int rep = 0; rep < reps; ++rep) {
        try {
            by_rep[rep] = run_repetition(config, rep);
        } catch (...) {
#pragma omp critical(bhtrl_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
#else
    (void)threads;
    for (int rep = 0; rep < reps; ++rep) by_rep[rep] = run_repetition(config, rep);
#endif
    return flatten(by_rep, config.agents.size());
}

std::vector<RunRecord> run_experiment_serial(const ExperimentConfig& config) {
    validate(config);
    std::vector<std::vector<std::vector<RunRecord>>> by_rep;
    by_rep.reserve(static_cast<std::size_t>(config.repetitions));
    for (int rep = 0; rep < config.repetitions; ++rep) by_rep.push_back(run_repetition(config, rep));
    return flatten(by_rep, config.agents.size());
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
    struct Accumulator {
        std::vector<double> regret;
        std::vector<double> p;
    };
    std::vector<std::string> order;
    std::map<std::string, std::map<int, Accumulator>> groups;
    for (const RunRecord& r : records) {
        auto [it, inserted] = groups.try_emplace(r.agent);
        if (inserted) order.push_back(r.agent);
        Accumulator& acc = it->second[r.episode];
        acc.regret.push_back(r.cumulative_regret);
        if (r.p_h0) acc.p.push_back(*r.p_h0);
    }
    auto mean_se = [](const std::vector<double>& xs) {
        if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); }))
            return std::pair{xs.front(), 0.0};
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        if (xs.size() < 2) return std::pair{mean, 0.0};
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        return std::pair{mean, sd / std::sqrt(static_cast<double>(xs.size()))};
    };
    std::vector<SummaryRow> out;
    for (const std::string& agent : order) {
        for (const auto& [episode, acc] : groups[agent]) {
            SummaryRow row;
            row.agent = agent;
            row.episode = episode;
            row.reps = static_cast<int>(acc.regret.size());
            std::tie(row.cumulative_regret_mean, row.cumulative_regret_se) = mean_se(acc.regret);
            if (!acc.p.empty()) {
                const auto [m, se] = mean_se(acc.p);
                row.p_h0_mean = m;
                row.p_h0_se = se;
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace bhtrl
