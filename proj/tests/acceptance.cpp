// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bhtrl/config.hpp"
#include "bhtrl/envs.hpp"
#include "bhtrl/experiment.hpp"
#include "bhtrl/hypothesis.hpp"
#include "bhtrl/planning.hpp"
#include "bhtrl/records_io.hpp"
#include "oracles.hpp"

using namespace bhtrl;

namespace {

constexpr std::uint64_t kMasterSeed = 20200710;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [violated]");
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

int failures = 0;

void report(int id, const std::string& name, double budget_seconds, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_seconds > 0.0) v.require(secs < budget_seconds, "runtime " + fmt(secs) + " s < " + fmt(budget_seconds) + " s");
    if (!v.pass) ++failures;
    std::printf("%s criterion %d: %s -- %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str());
    std::fflush(stdout);
}

AgentSpec agent(AgentKind kind, const std::string& name, double prior_h0 = 0.5) {
    AgentSpec a;
    a.kind = kind;
    a.name = name;
    a.prior_h0 = prior_h0;
    return a;
}

ExperimentConfig riverswim_experiment(EnvFamily family, std::vector<AgentSpec> agents, int episodes = 300) {
    ExperimentConfig c;
    c.env.family = family;
    c.horizon = 20;
    c.episodes = episodes;
    c.repetitions = 20;
    c.master_seed = kMasterSeed;
    c.agents = std::move(agents);
    return c;
}

const SummaryRow& row_at(const std::vector<SummaryRow>& rows, const std::string& agent, int episode) {
    for (const SummaryRow& r : rows)
        if (r.agent == agent && r.episode == episode) return r;
    throw std::runtime_error("no summary row for " + agent);
}

double pooled(double se1, double se2) { return std::sqrt(se1 * se1 + se2 * se2); }

// Shared runs for criteria 4 to 7 and 9.
struct RiverRuns {
    std::vector<RunRecord> mdp_records;
    std::vector<SummaryRow> mdp;
    std::vector<SummaryRow> cb;
    double seconds_mdp = 0.0;
    double seconds_cb = 0.0;
};

RiverRuns& river_runs() {
    static RiverRuns runs = [] {
        RiverRuns r;
        const std::vector<AgentSpec> agents{agent(AgentKind::kCbPs, "cb_ps"), agent(AgentKind::kMdpPs, "mdp_ps"),
                                            agent(AgentKind::kBhtRl, "bht_rl")};
        auto t0 = std::chrono::steady_clock::now();
        r.mdp_records = run_experiment(riverswim_experiment(EnvFamily::kRiverSwim, agents));
        r.mdp = summarize(r.mdp_records);
        auto t1 = std::chrono::steady_clock::now();
        r.cb = summarize(run_experiment(riverswim_experiment(EnvFamily::kRiverSwimCb, agents)));
        auto t2 = std::chrono::steady_clock::now();
        r.seconds_mdp = std::chrono::duration<double>(t1 - t0).count();
        r.seconds_cb = std::chrono::duration<double>(t2 - t1).count();
        return r;
    }();
    return runs;
}

Verdict criterion1() {
    Verdict v;
    const std::vector<double> a11{1, 1};
    const TransitionCounts empty(2, 2, 2);
    v.require(posterior_null_probability(empty, a11, 0.5) == 0.5 && posterior_null_probability(empty, a11, 0.3) == 0.3,
              "zero counts return the prior");
    TransitionCounts one(2, 2, 2);
    one.add(0, 0, 1);
    v.require(posterior_null_probability(one, a11, 0.5) == 0.5, "single transition gives 0.5");
    TransitionCounts two(2, 2, 2);
    two.add(0, 0, 1);
    two.add(0, 1, 1);
    const double p47 = posterior_null_probability(two, a11, 0.5);
    v.require(std::abs(p47 - 4.0 / 7.0) <= 1e-9, "tied-evidence case " + fmt(p47) + " = 4/7");

    Rng rng = derive_stream(kMasterSeed, 1);
    const double scalars[3] = {0.25, 1.0, 4.0};
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int S = 1 + static_cast<int>(rng.uniform_index(3));
        const int A = 1 + static_cast<int>(rng.uniform_index(2));
        const int total = static_cast<int>(rng.uniform_index(21));
        TransitionCounts c(S, A, S);
        for (int k = 0; k < total; ++k)
            c.add(static_cast<int>(rng.uniform_index(S)), static_cast<int>(rng.uniform_index(A)),
                  static_cast<int>(rng.uniform_index(S)));
        const std::vector<double> alpha(static_cast<std::size_t>(S), scalars[rng.uniform_index(3)]);
        const double prior = i % 4 == 0 ? 0.5 : rng.uniform01();
        worst = std::max(worst, std::abs(posterior_null_probability(c, alpha, prior) -
                                         oracle::oracle_null_probability(c, alpha, prior)));
    }
    v.require(worst <= 1e-9, "200 random tensors, max |diff| " + fmt(worst) + " <= 1e-9");
    return v;
}

Verdict criterion2() {
    Verdict v;
    Rng rng = derive_stream(kMasterSeed, 2);
    double worst = 0.0;
    int argmax_mismatch = 0;
    for (int i = 0; i < 50; ++i) {
        const int S = 1 + static_cast<int>(rng.uniform_index(3));
        const int A = 1 + static_cast<int>(rng.uniform_index(2));
        const int H = 1 + static_cast<int>(rng.uniform_index(3));
        const MdpModel m = oracle::random_model(S, A, H, rng);
        const PlanResult plan = backward_induction(m);
        const oracle::BruteForcePlan bf = oracle::brute_force_plan(m);
        for (int s = 0; s < S; ++s)
            for (int h = 0; h < H; ++h) {
                worst = std::max(worst, std::abs(plan.values.at(s, h) - bf.values[static_cast<std::size_t>(s) * H + h]));
                argmax_mismatch += plan.policy.at(s, h) != bf.policy.at(s, h);
            }
    }
    v.require(worst <= 1e-12, "max value gap " + fmt(worst) + " <= 1e-12");
    v.require(argmax_mismatch == 0, std::to_string(argmax_mismatch) + " argmax mismatches");
    return v;
}

double scan_variation(const MdpModel& m) {
    double best = 0.0;
    for (int s = 0; s < m.num_states; ++s)
        for (int a = 0; a < m.num_actions; ++a)
            for (int b = 0; b < m.num_actions; ++b)
                for (int n = 0; n < m.num_states; ++n) best = std::max(best, std::abs(m.p(s, a, n) - m.p(s, b, n)));
    return best;
}

Verdict criterion3() {
    Verdict v;
    const double time_tm[3][3] = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    const double weather_tm[2][2] = {{0.6, 0.4}, {0.3, 0.7}};
    const double endo_tm[2][4][4] = {
        {{0.45, 0.35, 0.1, 0.1}, {0.5, 0.3, 0.15, 0.05}, {0.05, 0.3, 0.3, 0.35}, {0.05, 0.05, 0.35, 0.55}},
        {{0.35, 0.35, 0.15, 0.15}, {0.4, 0.25, 0.2, 0.15}, {0.2, 0.25, 0.3, 0.25}, {0.15, 0.15, 0.3, 0.4}},
    };
    const double th_time[2][3] = {{0.001, 0.01, 0.005}, {0.001, 0.02, 0.01}};
    const double th_weather[2][2] = {{0.01, 0.015}, {0.01, 0.025}};
    const double th_endo[2][4] = {{0.005, 0.4, 0.35, 2.25}, {0.01, 0.405, 1.75, 2.5}};

    const Environment mh = build_mobile_health(MobileHealthConfig{}, 10);
    MobileHealthConfig cb_cfg;
    cb_cfg.bandit_variant = true;
    const Environment mh_cb = build_mobile_health(cb_cfg, 10);
    int mismatches = 0;
    for (int t = 0; t < 3; ++t)
        for (int w = 0; w < 2; ++w)
            for (int z = 0; z < 4; ++z)
                for (int a = 0; a < 2; ++a) {
                    const int s = (t * 2 + w) * 4 + z;
                    mismatches += mh.model.r(s, a) != th_time[a][t] + th_weather[a][w] + th_endo[a][z];
                    for (int t2 = 0; t2 < 3; ++t2)
                        for (int w2 = 0; w2 < 2; ++w2)
                            for (int z2 = 0; z2 < 4; ++z2) {
                                const int n = (t2 * 2 + w2) * 4 + z2;
                                const double x = time_tm[t][t2] * weather_tm[w][w2];
                                mismatches += mh.model.p(s, a, n) != x * endo_tm[a][z][z2];
                                mismatches += mh_cb.model.p(s, a, n) != x * endo_tm[0][z][z2];
                            }
                }
    v.require(mismatches == 0, "mobile-health cells matching tables: " + std::to_string(mismatches) + " mismatches");
    const double r = mh.model.r((1 * 2 + 1) * 4 + 3, 1);
    v.require(std::abs(r - 2.545) < 1e-15, "E[R|afternoon,poor,engaged,met,a=1] = " + fmt(r));

    const MdpModel rs_cb = build_riverswim_cb(RiverSwimConfig{}, 20);
    const MdpModel rs = build_riverswim(RiverSwimConfig{}, 20);
    v.require(std::all_of(rs_cb.transitions.begin(), rs_cb.transitions.end(), [](double p) { return p == 1.0 / 6.0; }),
              "riverswim_cb rows all 1/6");

    Rng rng = derive_stream(kMasterSeed, 3);
    const MdpModel rnd = build_random_mdp(RandomMdpConfig{}, 10, rng);
    const MdpModel rnd_cb = make_bandit_by_action_copy(rnd);
    const bool endpoints = interpolate(rs_cb, rs, 0.0).transitions == rs_cb.transitions &&
                           interpolate(rs_cb, rs, 1.0).transitions == rs.transitions &&
                           interpolate(rnd_cb, rnd, 0.0).transitions == rnd_cb.transitions &&
                           interpolate(rnd_cb, rnd, 1.0).transitions == rnd.transitions &&
                           interpolate(mh_cb, mh, 0.0).model.transitions == mh_cb.model.transitions &&
                           interpolate(mh_cb, mh, 1.0).model.transitions == mh.model.transitions;
    v.require(endpoints, "interpolate endpoints bit-for-bit");

    const bool cb_zero = max_action_variation(rs_cb) == 0.0 && max_action_variation(mh_cb.model) == 0.0 &&
                         max_action_variation(rnd_cb) == 0.0 && scan_variation(rs_cb) == 0.0 &&
                         scan_variation(mh_cb.model) == 0.0 && scan_variation(rnd_cb) == 0.0;
    v.require(cb_zero, "variation 0 on every CB variant");
    const double var = max_action_variation(mh.model);
    const double scanned = scan_variation(mh.model);
    v.require(std::abs(var - 0.105) < 1e-12 && std::abs(scanned - 0.105) < 1e-12,
              "mobile-health MDP variation " + fmt(var) + " (scan " + fmt(scanned) + ") = 0.105");
    return v;
}

Verdict criterion4() {
    Verdict v;
    const RiverRuns& runs = river_runs();
    const SummaryRow& cb = row_at(runs.mdp, "cb_ps", 299);
    const SummaryRow& mdp = row_at(runs.mdp, "mdp_ps", 299);
    const double se = pooled(cb.cumulative_regret_se, mdp.cumulative_regret_se);
    v.require(cb.cumulative_regret_mean - mdp.cumulative_regret_mean > 2.0 * se,
              "cb_ps " + fmt(cb.cumulative_regret_mean) + " - mdp_ps " + fmt(mdp.cumulative_regret_mean) + " > 2 x " +
                  fmt(se));
    const double half = row_at(runs.mdp, "cb_ps", 149).cumulative_regret_mean;
    v.require(cb.cumulative_regret_mean >= 1.4 * half,
              "cb_ps K=300 / K=150 = " + fmt(cb.cumulative_regret_mean / half) + " >= 1.4");
    v.require(runs.seconds_mdp < 120.0, "runtime " + fmt(runs.seconds_mdp) + " s < 120 s");
    return v;
}

Verdict criterion5() {
    Verdict v;
    const RiverRuns& runs = river_runs();
    const SummaryRow& cb = row_at(runs.cb, "cb_ps", 299);
    const SummaryRow& mdp = row_at(runs.cb, "mdp_ps", 299);
    const double se = pooled(cb.cumulative_regret_se, mdp.cumulative_regret_se);
    v.require(mdp.cumulative_regret_mean - cb.cumulative_regret_mean > 2.0 * se,
              "mdp_ps " + fmt(mdp.cumulative_regret_mean) + " - cb_ps " + fmt(cb.cumulative_regret_mean) + " > 2 x " +
                  fmt(se));
    v.require(runs.seconds_cb < 120.0, "runtime " + fmt(runs.seconds_cb) + " s < 120 s");
    return v;
}

Verdict criterion6() {
    Verdict v;
    const RiverRuns& runs = river_runs();
    for (const auto* rows : {&runs.mdp, &runs.cb}) {
        const std::string env = rows == &runs.mdp ? "riverswim" : "riverswim_cb";
        const double cb = row_at(*rows, "cb_ps", 299).cumulative_regret_mean;
        const double mdp = row_at(*rows, "mdp_ps", 299).cumulative_regret_mean;
        const double bht = row_at(*rows, "bht_rl", 299).cumulative_regret_mean;
        const double better = std::min(cb, mdp);
        const double worse = std::max(cb, mdp);
        v.require(bht <= 1.5 * better, env + ": bht " + fmt(bht) + " <= 1.5 x " + fmt(better));
        v.require(bht <= 0.75 * worse, env + ": bht " + fmt(bht) + " <= 0.75 x " + fmt(worse));
    }
    return v;
}

Verdict criterion7() {
    Verdict v;
    const RiverRuns& runs = river_runs();
    const double p0 = row_at(runs.cb, "bht_rl", 299).p_h0_mean.value();
    const double p1 = row_at(runs.mdp, "bht_rl", 299).p_h0_mean.value();
    ExperimentConfig c = riverswim_experiment(EnvFamily::kRiverSwim, {agent(AgentKind::kBhtRl, "bht_rl")});
    c.env.lambda = 0.2;
    const double p02 = row_at(summarize(run_experiment(c)), "bht_rl", 299).p_h0_mean.value();
    v.require(p0 >= 0.9, "lambda=0 (riverswim_cb) mean p_h0 " + fmt(p0) + " >= 0.9");
    v.require(p1 <= 0.1, "lambda=1 (riverswim) mean p_h0 " + fmt(p1) + " <= 0.1");
    v.require(p02 > std::min(p0, p1) && p02 < std::max(p0, p1),
              "lambda=0.2 mean p_h0 " + fmt(p02) + " strictly between");
    return v;
}

Verdict criterion8() {
    Verdict v;
    int checked = 0;
    bool branches_ok = true;
    bool traces_ok = true;
    for (EnvFamily family : {EnvFamily::kRiverSwim, EnvFamily::kRiverSwimCb}) {
        for (int rep = 0; rep < 5; ++rep) {
            EnvSpec spec;
            spec.family = family;
            Rng env_rng = environment_stream(kMasterSeed, rep);
            const Environment env = build_environment(spec, 20, env_rng);
            const ValueTable v_star = backward_induction(env.model).values;
            const std::pair<AgentKind, double> pairs[2] = {{AgentKind::kCbPs, 1.0}, {AgentKind::kMdpPs, 0.0}};
            for (const auto& [base_kind, prior] : pairs) {
                auto base = make_agent(agent(base_kind, "base"), env, 0);
                auto bht = make_agent(agent(AgentKind::kBhtRl, "bht", prior), env, 1);
                Rng rb = agent_stream(kMasterSeed, rep, 2, 0);
                Rng rh = agent_stream(kMasterSeed, rep, 2, 0);
                const auto base_trace = run_agent(env.model, v_star, *base, rb, 300, rep, "x");
                const auto bht_trace = run_agent(env.model, v_star, *bht, rh, 300, rep, "x");
                const Branch want = prior == 1.0 ? Branch::kCb : Branch::kMdp;
                for (std::size_t k = 0; k < base_trace.size(); ++k) {
                    branches_ok = branches_ok && bht_trace[k].branch == want;
                    traces_ok = traces_ok && bht_trace[k].episode_regret == base_trace[k].episode_regret &&
                                bht_trace[k].cumulative_regret == base_trace[k].cumulative_regret;
                }
                ++checked;
            }
        }
    }
    v.require(branches_ok, "prior 1 always CB, prior 0 always MDP");
    v.require(traces_ok, std::to_string(checked) + " paired 300-episode traces identical draw for draw");
    return v;
}

Verdict criterion9() {
    Verdict v;
    const auto dir = std::filesystem::temp_directory_path() / "bhtrl_acceptance";
    std::filesystem::create_directories(dir);
    const ExperimentConfig c = riverswim_experiment(
        EnvFamily::kRiverSwim,
        {agent(AgentKind::kCbPs, "cb_ps"), agent(AgentKind::kMdpPs, "mdp_ps"), agent(AgentKind::kBhtRl, "bht_rl")});
    write_records_csv(run_experiment(c), dir / "first.csv");
    write_records_csv(run_experiment(c), dir / "second.csv");
    auto bytes = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = bytes(dir / "first.csv");
    const std::string b = bytes(dir / "second.csv");
    v.require(!a.empty() && a == b, "records.csv byte-identical across runs (" + std::to_string(a.size()) + " bytes)");
    v.require(a == format_records_csv(river_runs().mdp_records), "matches the earlier run of the same config");
    v.require(run_experiment_serial(c) == river_runs().mdp_records, "serial reference path agrees");
    return v;
}

Verdict criterion10() {
    Verdict v;
    ExperimentConfig c;
    c.env.family = EnvFamily::kMobileHealth;
    c.horizon = 10;
    c.episodes = 400;
    c.repetitions = 20;
    c.master_seed = kMasterSeed;
    c.agents = {agent(AgentKind::kBhtRl, "bht_rl"), agent(AgentKind::kBhtRlFactored, "bht_rl_factored")};
    const auto rows = summarize(run_experiment(c));
    const SummaryRow& flat = row_at(rows, "bht_rl", 399);
    const SummaryRow& fact = row_at(rows, "bht_rl_factored", 399);
    const double se = pooled(flat.p_h0_se.value(), fact.p_h0_se.value());
    v.require(flat.p_h0_mean.value() - fact.p_h0_mean.value() > se,
              "flat mean p_h0 " + fmt(flat.p_h0_mean.value()) + " - factored " + fmt(fact.p_h0_mean.value()) + " > " +
                  fmt(se));
    return v;
}

}  // namespace

int main() {
    std::printf("acceptance suite, master seed %llu, %d worker(s)\n", static_cast<unsigned long long>(kMasterSeed),
                configured_threads());
    report(1, "hypothesis posterior matches the predictive oracle", 5.0, criterion1);
    report(2, "backward induction matches policy enumeration", 5.0, criterion2);
    report(3, "environment golden values", 1.0, criterion3);
    report(4, "riverswim MDP ordering (mdp_ps beats cb_ps, cb_ps linear)", 0.0, criterion4);
    report(5, "riverswim CB ordering (cb_ps beats mdp_ps)", 0.0, criterion5);
    report(6, "bht_rl comparable to the better base agent", 0.0, criterion6);
    report(7, "null posterior trajectories across lambda", 180.0, criterion7);
    report(8, "prior endpoints reduce bht_rl to the base agents", 30.0, criterion8);
    report(9, "byte-identical records.csv", 0.0, criterion9);
    report(10, "factored test accumulates evidence faster", 180.0, criterion10);
    std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
