#include "bhtrl/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bhtrl {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& item : object.items()) {
        if (!allowed.count(item.key())) throw ConfigError(path + "." + item.key(), "unknown key");
    }
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(path, "integer out of range");
    return static_cast<int>(v);
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

template <typename T, typename Getter>
void read_optional(const json& object, const char* key, const std::string& path, T& target, Getter getter) {
    if (auto it = object.find(key); it != object.end()) target = getter(*it, path + "." + key);
}

EnvFamily parse_family(const std::string& name, const std::string& path) {
    if (name == "riverswim") return EnvFamily::kRiverSwim;
    if (name == "riverswim_cb") return EnvFamily::kRiverSwimCb;
    if (name == "mobile_health") return EnvFamily::kMobileHealth;
    if (name == "random_mdp") return EnvFamily::kRandomMdp;
    throw ConfigError(path, "unknown family '" + name + "'");
}

AgentKind parse_kind(const std::string& name, const std::string& path) {
    if (name == "cb_ps") return AgentKind::kCbPs;
    if (name == "mdp_ps") return AgentKind::kMdpPs;
    if (name == "bht_rl") return AgentKind::kBhtRl;
    if (name == "bht_rl_factored") return AgentKind::kBhtRlFactored;
    if (name == "optimal") return AgentKind::kOptimal;
    throw ConfigError(path, "unknown agent kind '" + name + "'");
}

EnvSpec parse_env(const json& j) {
    const std::string path = "env";
    require_object(j, path);
    EnvSpec env;
    if (!j.contains("family")) throw ConfigError(path + ".family", "missing");
    env.family = parse_family(get_string(j["family"], path + ".family"), path + ".family");
    if (j.contains("lambda")) env.lambda = get_number(j["lambda"], path + ".lambda");

    switch (env.family) {
        case EnvFamily::kRiverSwim:
        case EnvFamily::kRiverSwimCb: {
            reject_unknown(j, path,
                           {"family", "lambda", "num_states", "left_success", "right_advance", "right_stay",
                            "right_retreat", "first_advance", "first_stay", "last_stay", "last_retreat",
                            "reward_left_nest", "reward_right_nest", "reward_noise_var", "start_dist"});
            RiverSwimConfig& c = env.riverswim;
            read_optional(j, "num_states", path, c.num_states, get_int);
            read_optional(j, "left_success", path, c.left_success, get_number);
            read_optional(j, "right_advance", path, c.right_advance, get_number);
            read_optional(j, "right_stay", path, c.right_stay, get_number);
            read_optional(j, "right_retreat", path, c.right_retreat, get_number);
            read_optional(j, "first_advance", path, c.first_advance, get_number);
            read_optional(j, "first_stay", path, c.first_stay, get_number);
            read_optional(j, "last_stay", path, c.last_stay, get_number);
            read_optional(j, "last_retreat", path, c.last_retreat, get_number);
            read_optional(j, "reward_left_nest", path, c.reward_left_nest, get_number);
            read_optional(j, "reward_right_nest", path, c.reward_right_nest, get_number);
            read_optional(j, "reward_noise_var", path, c.reward_noise_var, get_number);
            read_optional(j, "start_dist", path, c.start_dist, get_number_list);
            break;
        }
        case EnvFamily::kMobileHealth: {
            reject_unknown(j, path, {"family", "lambda", "bandit_variant", "reward_noise_var", "start_dist"});
            MobileHealthConfig& c = env.mobile_health;
            read_optional(j, "bandit_variant", path, c.bandit_variant, get_bool);
            read_optional(j, "reward_noise_var", path, c.reward_noise_var, get_number);
            read_optional(j, "start_dist", path, c.start_dist, get_number_list);
            break;
        }
        case EnvFamily::kRandomMdp: {
            reject_unknown(j, path,
                           {"family", "lambda", "num_states", "num_actions", "nonzero_entries_per_row",
                            "reward_noise_var"});
            RandomMdpConfig& c = env.random_mdp;
            read_optional(j, "num_states", path, c.num_states, get_int);
            read_optional(j, "num_actions", path, c.num_actions, get_int);
            read_optional(j, "nonzero_entries_per_row", path, c.nonzero_entries_per_row, get_int);
            read_optional(j, "reward_noise_var", path, c.reward_noise_var, get_number);
            break;
        }
    }
    return env;
}

AgentSpec parse_agent(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path,
                   {"kind", "name", "alpha", "prior_h0", "reward_prior", "known_noise", "assumed_noise_var",
                    "learn_exogenous", "exo_alpha"});
    AgentSpec a;
    if (!j.contains("kind")) throw ConfigError(path + ".kind", "missing");
    const std::string kind = get_string(j["kind"], path + ".kind");
    a.kind = parse_kind(kind, path + ".kind");
    a.name = kind;
    read_optional(j, "name", path, a.name, get_string);
    if (auto it = j.find("alpha"); it != j.end()) {
        if (it->is_array()) {
            a.alpha = get_number_list(*it, path + ".alpha");
        } else {
            a.alpha = {get_number(*it, path + ".alpha")};
        }
    }
    read_optional(j, "prior_h0", path, a.prior_h0, get_number);
    if (auto it = j.find("reward_prior"); it != j.end()) {
        const std::string rp = path + ".reward_prior";
        require_object(*it, rp);
        reject_unknown(*it, rp, {"mean", "var"});
        read_optional(*it, "mean", rp, a.reward_prior_mean, get_number);
        read_optional(*it, "var", rp, a.reward_prior_var, get_number);
    }
    read_optional(j, "known_noise", path, a.known_noise, get_bool);
    read_optional(j, "assumed_noise_var", path, a.assumed_noise_var, get_number);
    read_optional(j, "learn_exogenous", path, a.learn_exogenous, get_bool);
    read_optional(j, "exo_alpha", path, a.exo_alpha, get_number);
    return a;
}

OutputSpec parse_output(const json& j) {
    const std::string path = "output";
    require_object(j, path);
    reject_unknown(j, path, {"directory", "formats"});
    OutputSpec out;
    read_optional(j, "directory", path, out.directory, get_string);
    if (auto it = j.find("formats"); it != j.end()) {
        if (!it->is_array()) throw ConfigError(path + ".formats", "expected an array of strings");
        out.records = out.summary = out.model = false;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string fpath = path + ".formats[" + std::to_string(i) + "]";
            const std::string f = get_string((*it)[i], fpath);
            if (f == "records") {
                out.records = true;
            } else if (f == "summary") {
                out.summary = true;
            } else if (f == "model") {
                out.model = true;
            } else {
                throw ConfigError(fpath, "unknown format '" + f + "' (expected records, summary or model)");
            }
        }
    }
    return out;
}

}  // namespace

void validate(const ExperimentConfig& c) {
    if (c.horizon < 1) throw ConfigError("horizon", "must be at least 1");
    if (c.episodes < 1) throw ConfigError("episodes", "must be at least 1");
    if (c.repetitions < 1) throw ConfigError("repetitions", "must be at least 1");
    if (c.env.lambda && !(*c.env.lambda >= 0.0 && *c.env.lambda <= 1.0))
        throw ConfigError("env.lambda", "must lie in [0, 1]");
    if (c.env.lambda && c.env.family == EnvFamily::kRiverSwimCb)
        throw ConfigError("env.lambda", "not allowed with riverswim_cb; use family riverswim with lambda");
    if (c.env.lambda && c.env.family == EnvFamily::kMobileHealth && c.env.mobile_health.bandit_variant)
        throw ConfigError("env.lambda", "not allowed together with bandit_variant");
    if (c.agents.empty()) throw ConfigError("agents", "at least one agent is required");
    std::set<std::string> names;
    for (std::size_t i = 0; i < c.agents.size(); ++i) {
        const AgentSpec& a = c.agents[i];
        const std::string path = "agents[" + std::to_string(i) + "]";
        if (a.name.empty() || a.name.find_first_of(",\"\n\r") != std::string::npos)
            throw ConfigError(path + ".name", "must be non-empty and free of commas, quotes and newlines");
        if (!names.insert(a.name).second) throw ConfigError(path + ".name", "duplicate agent name '" + a.name + "'");
        if (!(a.prior_h0 >= 0.0 && a.prior_h0 <= 1.0)) throw ConfigError(path + ".prior_h0", "must lie in [0, 1]");
        if (a.alpha.empty()) throw ConfigError(path + ".alpha", "must not be empty");
        for (double x : a.alpha)
            if (!(x > 0.0)) throw ConfigError(path + ".alpha", "entries must be positive");
        if (!(a.reward_prior_var > 0.0)) throw ConfigError(path + ".reward_prior.var", "must be positive");
        if (!(a.assumed_noise_var > 0.0)) throw ConfigError(path + ".assumed_noise_var", "must be positive");
        if (!(a.exo_alpha > 0.0)) throw ConfigError(path + ".exo_alpha", "must be positive");
        if (a.kind == AgentKind::kBhtRlFactored && c.env.family != EnvFamily::kMobileHealth)
            throw ConfigError(path + ".kind", "bht_rl_factored needs a factored environment (mobile_health)");
    }
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    require_object(j, "<document>");
    for (const auto& item : j.items()) {
        static const std::set<std::string> allowed{"env",         "horizon", "episodes", "repetitions",
                                                   "master_seed", "agents",  "output"};
        if (!allowed.count(item.key())) throw ConfigError(item.key(), "unknown key");
    }
    ExperimentConfig c;
    if (!j.contains("env")) throw ConfigError("env", "missing");
    c.env = parse_env(j["env"]);
    read_optional(j, "horizon", "", c.horizon, [](const json& v, const std::string&) { return get_int(v, "horizon"); });
    read_optional(j, "episodes", "", c.episodes,
                  [](const json& v, const std::string&) { return get_int(v, "episodes"); });
    read_optional(j, "repetitions", "", c.repetitions,
                  [](const json& v, const std::string&) { return get_int(v, "repetitions"); });
    if (auto it = j.find("master_seed"); it != j.end()) {
        if (!it->is_number_integer()) throw ConfigError("master_seed", "expected a nonnegative integer");
        if (it->is_number_unsigned()) {
            c.master_seed = it->get<std::uint64_t>();
        } else {
            const auto v = it->get<long long>();
            if (v < 0) throw ConfigError("master_seed", "expected a nonnegative integer");
            c.master_seed = static_cast<std::uint64_t>(v);
        }
    }
    if (!j.contains("agents")) throw ConfigError("agents", "missing");
    if (!j["agents"].is_array()) throw ConfigError("agents", "expected an array");
    for (std::size_t i = 0; i < j["agents"].size(); ++i)
        c.agents.push_back(parse_agent(j["agents"][i], "agents[" + std::to_string(i) + "]"));
    if (j.contains("output")) c.output = parse_output(j["output"]);
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string to_string(EnvFamily family) {
    switch (family) {
        case EnvFamily::kRiverSwim: return "riverswim";
        case EnvFamily::kRiverSwimCb: return "riverswim_cb";
        case EnvFamily::kMobileHealth: return "mobile_health";
        case EnvFamily::kRandomMdp: return "random_mdp";
    }
    return "unknown";
}

std::string to_string(AgentKind kind) {
    switch (kind) {
        case AgentKind::kCbPs: return "cb_ps";
        case AgentKind::kMdpPs: return "mdp_ps";
        case AgentKind::kBhtRl: return "bht_rl";
        case AgentKind::kBhtRlFactored: return "bht_rl_factored";
        case AgentKind::kOptimal: return "optimal";
    }
    return "unknown";
}

}  // namespace bhtrl
