// Report emission: a JSON summary plus CSV tables for external plotting.
// Layout of the files is described in docs/report_format.md.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdlearn/experiment.hpp"

namespace sdlearn {

using Json = nlohmann::ordered_json;

// Canonical description of everything that determines a report's content,
// including the deltas that were run.
Json config_json(const SamplingRegime& regime, const ExperimentSetup& setup, const nn::MlpSpec& spec,
                 const nn::TrainConfig& config, const TaskSpec& task, std::uint64_t seed,
                 const std::vector<double>& deltas);

// SHA-1 of the git blob object wrapping `text`, as 40 hex digits.
std::string git_blob_hash(const std::string& text);

// "<regime>_seed<seed>_<first 12 hex digits of the config hash>"
std::string report_dir_name(const SamplingRegime& regime, std::uint64_t seed, const Json& config);

// Both create <out_dir>/<report_dir_name(...)>/ and return that path.
std::filesystem::path emit_report(const ClassificationReport& report, const std::filesystem::path& out_dir);
std::filesystem::path emit_report(const RegressionReport& report, const std::filesystem::path& out_dir);

// Building blocks shared with single-model evaluation.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string csv_number(double v);
std::string confusion_csv(const std::vector<std::pair<std::string, Eigen::MatrixXi>>& labelled);
std::string scatter_csv(const std::vector<std::pair<double, const std::vector<PredictionPair>*>>& by_delta);
std::string histogram_csv(const std::vector<std::pair<double, const Histogram*>>& by_delta);
Json histogram_json(const Histogram& h);
Json confusion_json(const Eigen::MatrixXi& m);

}  // namespace sdlearn
