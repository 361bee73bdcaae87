#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bhtrl/experiment.hpp"

namespace bhtrl {

/// records.csv grammar:
///   rep,episode,agent,episode_regret,cumulative_regret,p_h0,branch
/// Reals use 17 significant digits ("%.17g"); absent p_h0/branch are empty
/// fields; lines end in '\n'.
std::string format_records_csv(const std::vector<RunRecord>& records);
void write_records_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
std::vector<RunRecord> parse_records_csv(const std::string& text);
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

/// summary.csv:
///   agent,episode,reps,cumulative_regret_mean,cumulative_regret_se,p_h0_mean,p_h0_se
std::string format_summary_csv(const std::vector<SummaryRow>& rows);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

/// JSON dump of a model: flat row-major tensors plus shape and diagnostics.
std::string model_to_json(const MdpModel& model);
void write_model_json(const MdpModel& model, const std::filesystem::path& path);

std::string format_real(double value);

}  // namespace bhtrl
