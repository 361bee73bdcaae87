#include "bhtrl/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bhtrl/config.hpp"
#include "bhtrl/envs.hpp"
#include "bhtrl/experiment.hpp"
#include "bhtrl/planning.hpp"
#include "bhtrl/records_io.hpp"

#ifndef BHTRL_VERSION
#define BHTRL_VERSION "0.0.0"
#endif

namespace bhtrl {

namespace {

namespace fs = std::filesystem;

std::string version_text() {
    std::string text = std::string("bhtrl ") + BHTRL_VERSION + " (C++" + std::to_string(__cplusplus / 100 % 100);
#ifdef _OPENMP
    text += ", OpenMP " + std::to_string(_OPENMP);
#else
    text += ", serial";
#endif
    text += ", rng mt19937_64/splitmix64)";
    return text;
}

void write_outputs(const ExperimentConfig& config, const fs::path& dir, std::ostream& out) {
    fs::create_directories(dir);
    const std::vector<RunRecord> records = run_experiment(config);
    if (config.output.records) write_records_csv(records, dir / "records.csv");
    const std::vector<SummaryRow> summary = summarize(records);
    if (config.output.summary) write_summary_csv(summary, dir / "summary.csv");
    if (config.output.model) {
        Rng rng = environment_stream(config.master_seed, 0);
        write_model_json(build_environment(config.env, config.horizon, rng).model, dir / "model.json");
    }
    out << "wrote " << dir.string() << "\n";
    for (const SummaryRow& row : summary) {
        if (row.episode != config.episodes - 1) continue;
        out << "  " << row.agent << ": cumulative regret " << format_real(row.cumulative_regret_mean) << " +/- "
            << format_real(row.cumulative_regret_se);
        if (row.p_h0_mean) out << ", p_h0 " << format_real(*row.p_h0_mean);
        out << "\n";
    }
}

std::vector<std::pair<std::string, double>> parse_values(const std::string& list) {
    std::vector<std::pair<std::string, double>> values;
    std::string::size_type start = 0;
    for (;;) {
        const auto comma = list.find(',', start);
        const std::string token = list.substr(start, comma - start);
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (token.empty() || end != token.c_str() + token.size())
            throw ConfigError("--values", "'" + token + "' is not a number");
        values.emplace_back(token, v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayesian hypothesis testing RL simulator and benchmark harness", "bhtrl"};
    app.set_version_flag("--version", version_text());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string dump_path;
    std::string param;
    std::string values;

    auto* run = app.add_subcommand("run", "Run one experiment and write records.csv / summary.csv");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory (overrides output.directory)");

    auto* inspect = app.add_subcommand("inspect-env", "Describe the configured environment");
    inspect->add_option("--config", config_path, "Experiment config (JSON)")->required();
    inspect->add_option("--dump", dump_path, "Write the model as JSON to this path");

    auto* sweep = app.add_subcommand("sweep", "Run one experiment per parameter value");
    sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sweep->add_option("--param", param, "Swept parameter (lambda)")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required();
    sweep->add_option("--out", out_dir, "Parent output directory (overrides output.directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig config = load_config(config_path);
        if (*run) {
            write_outputs(config, out_dir.empty() ? fs::path(config.output.directory) : fs::path(out_dir), out);
        } else if (*inspect) {
            Rng rng = environment_stream(config.master_seed, 0);
            const Environment env = build_environment(config.env, config.horizon, rng);
            const MdpModel& m = env.model;
            out << "states: " << m.num_states << "\n"
                << "actions: " << m.num_actions << "\n"
                << "horizon: " << m.horizon << "\n"
                << "max_action_variation: " << format_real(max_action_variation(m)) << "\n"
                << "optimal_start_value: " << format_real(start_value(m, backward_induction(m).values)) << "\n";
            if (!dump_path.empty()) {
                write_model_json(m, dump_path);
                out << "model: " << dump_path << "\n";
            }
        } else if (*sweep) {
            if (param != "lambda") throw ConfigError("--param", "only 'lambda' can be swept");
            const fs::path parent = out_dir.empty() ? fs::path(config.output.directory) : fs::path(out_dir);
            const auto parsed = parse_values(values);
            std::vector<ExperimentConfig> runs;
            for (const auto& [token, value] : parsed) {
                ExperimentConfig c = config;
                c.env.lambda = value;
                validate(c);
                runs.push_back(std::move(c));
            }
            for (std::size_t i = 0; i < runs.size(); ++i)
                write_outputs(runs[i], parent / ("lambda_" + parsed[i].first), out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace bhtrl
