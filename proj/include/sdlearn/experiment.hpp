// End-to-end experiments: dataset -> Fourier features -> training -> metrics.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdlearn/dataset.hpp"
#include "sdlearn/dft.hpp"
#include "sdlearn/trainer.hpp"

namespace sdlearn {

enum class TaskKind { Classification, Regression };
enum class RegressionTargets { SOnly, AllThree };

std::string_view to_string(TaskKind k);
std::string_view to_string(RegressionTargets t);
TaskKind task_kind_from_string(std::string_view s);
RegressionTargets regression_targets_from_string(std::string_view s);

struct TaskSpec {
    TaskKind kind = TaskKind::Classification;
    RegressionTargets targets = RegressionTargets::SOnly;

    nn::Head head() const { return kind == TaskKind::Classification ? nn::Head::Softmax : nn::Head::Linear; }
    nn::Index output_width() const;
    std::vector<std::string> target_names() const;  // empty for classification
    std::string label() const;                        // "classification", "regression_s", ...
};

// Data-generation settings shared by every point of an experiment.
struct ExperimentSetup {
    TimeGrid grid;
    BathSpec bath = BathSpec::zero_temperature();
    QubitInit init = QubitInit::plus_state();
    SplitSizes sizes;
    double quadrature_tol = kDefaultQuadratureTol;
    unsigned threads = 1;
};

// Hidden widths used for each experiment family.
std::vector<nn::Index> default_hidden_widths(const SamplingRegime& regime, const TaskSpec& task);
nn::MlpSpec default_spec(const SamplingRegime& regime, const TaskSpec& task, std::size_t n_points);

// Iteration budget per experiment family; paper_scale raises varying-parameter regression to 1e5.
std::int64_t default_iterations(const SamplingRegime& regime, const TaskSpec& task, bool paper_scale);

// One-hot class rows or [s(, eta, omega_c)] regression rows.
nn::SplitData make_split(const std::vector<LabeledExample>& examples, const TaskSpec& task);
nn::TrainingData make_training_data(const LabeledDataset& ds, const TaskSpec& task);

void check_task_compatible(const SamplingRegime& regime, const TaskSpec& task);

struct ClassificationPoint {
    double delta = 0.0;
    std::uint64_t data_seed = 0;
    std::uint64_t init_seed = 0;
    double train_accuracy = 0.0;
    double valid_accuracy = 0.0;
    double test_accuracy = 0.0;
    Eigen::MatrixXi train_confusion;
    Eigen::MatrixXi test_confusion;
    std::vector<nn::HistoryRow> history;
};

struct ClassificationReport {
    SamplingRegime regime;
    ExperimentSetup setup;
    nn::MlpSpec spec;
    nn::TrainConfig config;
    std::uint64_t seed = 0;
    std::vector<ClassificationPoint> points;  // one per delta
};

struct PredictionPair {
    double predicted;
    double truth;
    bool ohmic;  // example has s == 1
};

struct Histogram {
    std::vector<double> edges;  // size = bins + 1
    std::vector<std::size_t> counts;
    std::vector<double> percentages;
    std::size_t retained = 0;
};

struct TargetResult {
    std::string name;
    double train_mse = 0.0;
    double test_mse = 0.0;
    std::vector<PredictionPair> test_pairs;
    Histogram histogram;
};

struct RegressionPoint {
    double delta = 0.0;
    std::uint64_t data_seed = 0;
    std::uint64_t init_seed = 0;
    double train_mse = 0.0;
    double valid_mse = 0.0;
    double test_mse = 0.0;
    std::vector<TargetResult> targets;
    std::vector<nn::HistoryRow> history;
};

struct RegressionReport {
    SamplingRegime regime;
    ExperimentSetup setup;
    nn::MlpSpec spec;
    nn::TrainConfig config;
    RegressionTargets targets = RegressionTargets::SOnly;
    std::uint64_t seed = 0;
    std::vector<RegressionPoint> points;
};

// Training divergence at one sweep point, tagged with its delta.
class SweepPointDiverged : public std::runtime_error {
public:
    SweepPointDiverged(double delta, const std::string& what) : std::runtime_error(what), delta_(delta) {}
    double delta() const { return delta_; }

private:
    double delta_;
};

using ProgressFn = std::function<void(const std::string&)>;

struct RunOptions {
    // For varying_all: the deltas to run, one fresh model each. Empty means the
    // full 0..1.8 sweep. Ignored for fixed-coupling regimes.
    std::vector<double> deltas;
    ProgressFn progress;
};

// Seeds for a sweep point are keyed by delta (k = round(1e6 * delta)): dataset
// derive_seed(seed, 0, k), init derive_seed(config.seed, 1, k).
// A single fixed-coupling run uses seed and config.seed directly.
ClassificationReport run_classification(const SamplingRegime& regime, const nn::MlpSpec& spec,
                                        const nn::TrainConfig& config, std::uint64_t seed,
                                        const ExperimentSetup& setup, const RunOptions& options = {});

RegressionReport run_regression(const SamplingRegime& regime, RegressionTargets targets,
                                const nn::MlpSpec& spec, const nn::TrainConfig& config,
                                std::uint64_t seed, const ExperimentSetup& setup,
                                const RunOptions& options = {});

// 13 uniform bins over [-R, R], R = max |error| rounded up to one significant figure.
std::vector<double> default_error_bin_edges(const std::vector<PredictionPair>& pairs);

// Errors are predicted - truth; values outside the edges land in the end bins.
// With dedupe_ohmic only the first example with s == 1 is kept.
Histogram error_histogram(const std::vector<PredictionPair>& pairs, const std::vector<double>& bin_edges,
                          bool dedupe_ohmic);

}  // namespace sdlearn
