// Full-batch training loop and evaluation helpers.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sdlearn/adam.hpp"
#include "sdlearn/column_symmetry.hpp"
#include "sdlearn/mlp.hpp"

namespace sdlearn::nn {

struct TrainConfig {
    std::int64_t iterations = 1000;
    AdamHyper adam;
    std::uint64_t seed = 0;  // weight initialisation
    LossKind loss = LossKind::CrossEntropy;
    std::int64_t eval_every = 100;

    void validate(const MlpSpec& spec) const;
};

struct SplitData {
    Matrix inputs;   // M x input_width
    Matrix targets;  // one-hot rows (classification) or regression targets
};

struct TrainingData {
    SplitData train;
    SplitData valid;
    std::optional<SplitData> test;
    // When set and satisfied exactly by the training inputs, the first layer
    // runs on the distinct input columns only.
    std::optional<ColumnSymmetry> symmetry;
};

struct HistoryRow {
    std::int64_t iteration = 0;
    double train_loss = 0.0;
    double valid_loss = 0.0;
    double train_metric = 0.0;  // accuracy or MSE
    double valid_metric = 0.0;
    std::optional<double> test_loss;
    std::optional<double> test_metric;
};

struct TrainResult {
    ModelParams params;
    std::vector<HistoryRow> history;
    std::vector<double> loss_trace;  // training loss before each step
};

class TrainingDiverged : public std::runtime_error {
public:
    explicit TrainingDiverged(std::int64_t iteration);
    std::int64_t iteration() const { return iteration_; }

private:
    std::int64_t iteration_;
};

using EvalCallback = std::function<void(const HistoryRow&)>;

TrainResult train(const MlpSpec& spec, const TrainingData& data, const TrainConfig& config,
                  const EvalCallback& on_eval = {});

struct ClassificationEval {
    double accuracy = 0.0;
    Eigen::MatrixXi confusion;  // rows: true class, cols: predicted class
};

struct RegressionEval {
    double mse = 0.0;
    std::vector<double> per_target_mse;
    Matrix predicted;
    Matrix truth;
};

Eigen::VectorXi argmax_rows(const Matrix& m);

ClassificationEval evaluate_classification(const ModelParams& params, const MlpSpec& spec,
                                           const SplitData& split);

RegressionEval evaluate_regression(const ModelParams& params, const MlpSpec& spec,
                                   const SplitData& split);

}  // namespace sdlearn::nn
