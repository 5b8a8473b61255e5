// Named end-to-end experiments behind stable identifiers.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sdlearn/config.hpp"

namespace sdlearn {

struct ReproduceTarget {
    std::string id;
    std::string description;
};

// regimeA-class, regimeB-class, fig4-sweep, fig5-regression, fig6-sweep,
// fig7-shortest, fig7-largest.
const std::vector<ReproduceTarget>& reproduce_targets();

struct ReproduceOptions {
    std::filesystem::path out_dir;
    bool paper_scale = false;
    std::optional<std::int64_t> iterations;  // overrides the family budget
    std::vector<double> deltas;              // sweeps only; empty = all ten values
    ProgressFn progress;
};

struct ReproduceOutcome {
    std::filesystem::path report_dir;
    std::string summary;  // one human-readable line per report
};

// Regime, task, network and budget come from the identifier; grid, bath, initial
// state, split sizes, optimiser settings, seeds and threads come from `base`.
std::vector<ReproduceOutcome> reproduce(const std::string& id, const RunConfig& base,
                                        const ReproduceOptions& options);

}  // namespace sdlearn
