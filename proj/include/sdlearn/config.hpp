// Run configuration: INI sections with key = value lines. Every key is optional
// and falls back to the documented default; unknown sections or keys are errors.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdlearn/experiment.hpp"

namespace sdlearn {

class ConfigError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kDefaultDataSeed = 20240601;
inline constexpr std::uint64_t kDefaultInitSeed = 7;

struct RunConfig {
    SamplingRegime regime = SamplingRegime::adjacent_s();
    ExperimentSetup setup;
    TaskSpec task;
    std::optional<std::vector<nn::Index>> hidden;  // nullopt: family default
    std::optional<std::int64_t> iterations;        // nullopt: family default
    nn::AdamHyper adam;
    std::int64_t eval_every = 100;
    std::uint64_t data_seed = kDefaultDataSeed;
    std::uint64_t init_seed = kDefaultInitSeed;
    std::string output_dir;  // empty: $SDLEARN_OUT, then ./sdlearn-out

    nn::MlpSpec network_spec() const;
    nn::TrainConfig train_config(bool paper_scale = false) const;
    void validate() const;
};

RunConfig parse_run_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

// The configuration as INI text; parse_run_config(to_ini(c)) == c.
std::string to_ini(const RunConfig& config);

// One line per key with its default, for --help.
std::string describe_config_keys();

}  // namespace sdlearn
