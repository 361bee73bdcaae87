#include "bhtrl/records_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bhtrl/envs.hpp"
#include "bhtrl/planning.hpp"
#include "json.hpp"

namespace bhtrl {

std::string format_real(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

namespace {

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing: " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading: " + std::strerror(errno));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_real(const std::string& field, int line_no) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
        throw std::runtime_error("records.csv line " + std::to_string(line_no) + ": bad number '" + field + "'");
    return v;
}

int parse_int(const std::string& field, int line_no) {
    char* end = nullptr;
    const long v = std::strtol(field.c_str(), &end, 10);
    if (field.empty() || end != field.c_str() + field.size())
        throw std::runtime_error("records.csv line " + std::to_string(line_no) + ": bad integer '" + field + "'");
    return static_cast<int>(v);
}

constexpr const char* kRecordsHeader = "rep,episode,agent,episode_regret,cumulative_regret,p_h0,branch";
constexpr const char* kSummaryHeader =
    "agent,episode,reps,cumulative_regret_mean,cumulative_regret_se,p_h0_mean,p_h0_se";

}  // namespace

std::string format_records_csv(const std::vector<RunRecord>& records) {
    std::string out = kRecordsHeader;
    out += '\n';
    for (const RunRecord& r : records) {
        out += std::to_string(r.rep);
        out += ',';
        out += std::to_string(r.episode);
        out += ',';
        out += r.agent;
        out += ',';
        out += format_real(r.episode_regret);
        out += ',';
        out += format_real(r.cumulative_regret);
        out += ',';
        if (r.p_h0) out += format_real(*r.p_h0);
        out += ',';
        if (r.branch) out += to_string(*r.branch);
        out += '\n';
    }
    return out;
}

void write_records_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
    write_text(format_records_csv(records), path);
}

std::vector<RunRecord> parse_records_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kRecordsHeader) throw std::runtime_error("records.csv: missing or bad header");
    std::vector<RunRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 7) throw std::runtime_error("records.csv line " + std::to_string(line_no) + ": expected 7 fields");
        RunRecord r;
        r.rep = parse_int(f[0], line_no);
        r.episode = parse_int(f[1], line_no);
        r.agent = f[2];
        r.episode_regret = parse_real(f[3], line_no);
        r.cumulative_regret = parse_real(f[4], line_no);
        if (!f[5].empty()) r.p_h0 = parse_real(f[5], line_no);
        if (f[6] == "CB") {
            r.branch = Branch::kCb;
        } else if (f[6] == "MDP") {
            r.branch = Branch::kMdp;
        } else if (!f[6].empty()) {
            throw std::runtime_error("records.csv line " + std::to_string(line_no) + ": bad branch '" + f[6] + "'");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
    try {
        return parse_records_csv(read_text(path));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = kSummaryHeader;
    out += '\n';
    for (const SummaryRow& r : rows) {
        out += r.agent + ',' + std::to_string(r.episode) + ',' + std::to_string(r.reps) + ',' +
               format_real(r.cumulative_regret_mean) + ',' + format_real(r.cumulative_regret_se) + ',';
        if (r.p_h0_mean) out += format_real(*r.p_h0_mean);
        out += ',';
        if (r.p_h0_se) out += format_real(*r.p_h0_se);
        out += '\n';
    }
    return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
    write_text(format_summary_csv(rows), path);
}

std::string model_to_json(const MdpModel& model) {
    nlohmann::ordered_json j;
    j["num_states"] = model.num_states;
    j["num_actions"] = model.num_actions;
    j["horizon"] = model.horizon;
    j["reward_noise_var"] = model.reward_noise_var;
    j["layout"] = "transitions[(s * num_actions + a) * num_states + s'], reward_mean[s * num_actions + a]";
    j["transitions"] = model.transitions;
    j["reward_mean"] = model.reward_mean;
    j["start_dist"] = model.start_dist;
    j["max_action_variation"] = max_action_variation(model);
    j["optimal_start_value"] = start_value(model, backward_induction(model).values);
    return j.dump(2) + "\n";
}

void write_model_json(const MdpModel& model, const std::filesystem::path& path) {
    write_text(model_to_json(model), path);
}

}  // namespace bhtrl
