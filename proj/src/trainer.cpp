#include "sdlearn/trainer.hpp"

#include <cmath>
#include <string>

namespace sdlearn::nn {
namespace {

double metric(const MlpSpec& spec, const Matrix& output, const Matrix& truth) {
    if (spec.head == Head::Linear) return loss_mse(output, truth);
    return (argmax_rows(output).array() == argmax_rows(truth).array()).cast<double>().mean();
}

void check_split(const MlpSpec& spec, const SplitData& split, const char* name) {
    if (split.inputs.rows() == 0 || split.inputs.rows() != split.targets.rows()) {
        throw ShapeMismatch(std::string(name) + " split is empty or has mismatched rows");
    }
    if (split.inputs.cols() != spec.input_width() || split.targets.cols() != spec.output_width()) {
        throw ShapeMismatch(std::string(name) + " split does not match the network widths");
    }
}

}  // namespace

void TrainConfig::validate(const MlpSpec& spec) const {
    if (iterations < 0) throw std::invalid_argument("train.iterations must be >= 0");
    if (eval_every < 1) throw std::invalid_argument("train.eval_every must be >= 1");
    if (!(adam.lr > 0.0)) throw std::invalid_argument("train.lr must be positive");
    if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
        throw std::invalid_argument("train.beta1 and train.beta2 must lie in [0, 1)");
    }
    if (!(adam.epsilon > 0.0)) throw std::invalid_argument("train.epsilon must be positive");
    if (loss != loss_for(spec.head)) {
        throw std::invalid_argument("loss " + std::string(to_string(loss)) + " does not match the " +
                                    std::string(to_string(spec.head)) + " head");
    }
}

TrainingDiverged::TrainingDiverged(std::int64_t iteration)
    : std::runtime_error("training diverged: non-finite loss at iteration " +
                         std::to_string(iteration)),
      iteration_(iteration) {}

TrainResult train(const MlpSpec& spec, const TrainingData& data, const TrainConfig& config,
                  const EvalCallback& on_eval) {
    spec.validate();
    config.validate(spec);
    check_split(spec, data.train, "train");
    check_split(spec, data.valid, "valid");
    if (data.test) check_split(spec, *data.test, "test");

    TrainResult result;
    result.params = init_params(spec, config.seed);
    ModelParams& params = result.params;
    AdamState state = AdamState::fresh(params, config.adam);

    const ColumnSymmetry* sym = nullptr;
    if (data.symmetry && data.symmetry->full_width == spec.input_width() &&
        data.symmetry->holds_for(data.train.inputs)) {
        sym = &*data.symmetry;
    }
    const Matrix compact_inputs = sym ? sym->compact(data.train.inputs) : Matrix{};
    const Matrix& step_inputs = sym ? compact_inputs : data.train.inputs;
    MlpSpec step_spec = spec;
    if (sym) step_spec.layer_widths.front() = sym->compact_width();

    auto record = [&](std::int64_t iteration) {
        HistoryRow row;
        row.iteration = iteration;
        const Matrix train_out = predict(params, spec, data.train.inputs);
        const Matrix valid_out = predict(params, spec, data.valid.inputs);
        row.train_loss = loss(config.loss, train_out, data.train.targets);
        row.valid_loss = loss(config.loss, valid_out, data.valid.targets);
        row.train_metric = metric(spec, train_out, data.train.targets);
        row.valid_metric = metric(spec, valid_out, data.valid.targets);
        if (data.test) {
            const Matrix test_out = predict(params, spec, data.test->inputs);
            row.test_loss = loss(config.loss, test_out, data.test->targets);
            row.test_metric = metric(spec, test_out, data.test->targets);
        }
        result.history.push_back(row);
        if (on_eval) on_eval(row);
    };

    record(0);
    result.loss_trace.reserve(static_cast<std::size_t>(config.iterations));
    ModelParams step_params;
    for (std::int64_t it = 1; it <= config.iterations; ++it) {
        const ModelParams* current = &params;
        if (sym) {
            step_params.layers.resize(params.layers.size());
            step_params.layers[0] = {sym->fold_weights(params.layers[0].weights), params.layers[0].bias};
            for (std::size_t l = 1; l < params.layers.size(); ++l) step_params.layers[l] = params.layers[l];
            current = &step_params;
        }
        const ForwardCache cache = forward(*current, step_spec, step_inputs);
        const double value = loss(config.loss, cache.output, data.train.targets);
        if (!std::isfinite(value)) throw TrainingDiverged(it);
        result.loss_trace.push_back(value);

        ModelParams grads = backward(*current, step_spec, cache, data.train.targets);
        if (sym) grads.layers[0].weights = sym->expand_gradient(grads.layers[0].weights);
        adam_step(params, grads, state);

        if (it % config.eval_every == 0 || it == config.iterations) record(it);
    }
    if (!params.all_finite()) throw TrainingDiverged(config.iterations);
    return result;
}

Eigen::VectorXi argmax_rows(const Matrix& m) {
    Eigen::VectorXi out(m.rows());
    for (Index r = 0; r < m.rows(); ++r) {
        Index best = 0;
        m.row(r).maxCoeff(&best);
        out[r] = static_cast<int>(best);
    }
    return out;
}

ClassificationEval evaluate_classification(const ModelParams& params, const MlpSpec& spec,
                                           const SplitData& split) {
    if (spec.head != Head::Softmax) {
        throw std::invalid_argument("evaluate_classification requires a softmax head");
    }
    check_split(spec, split, "evaluation");
    const Eigen::VectorXi predicted = argmax_rows(predict(params, spec, split.inputs));
    const Eigen::VectorXi truth = argmax_rows(split.targets);
    const auto classes = static_cast<int>(spec.output_width());
    ClassificationEval eval;
    eval.confusion = Eigen::MatrixXi::Zero(classes, classes);
    for (Index r = 0; r < predicted.size(); ++r) ++eval.confusion(truth[r], predicted[r]);
    eval.accuracy = static_cast<double>(eval.confusion.trace()) / static_cast<double>(predicted.size());
    return eval;
}

RegressionEval evaluate_regression(const ModelParams& params, const MlpSpec& spec,
                                   const SplitData& split) {
    if (spec.head != Head::Linear) {
        throw std::invalid_argument("evaluate_regression requires a linear head");
    }
    check_split(spec, split, "evaluation");
    RegressionEval eval;
    eval.predicted = predict(params, spec, split.inputs);
    eval.truth = split.targets;
    eval.mse = loss_mse(eval.predicted, eval.truth);
    for (Index c = 0; c < eval.truth.cols(); ++c) {
        eval.per_target_mse.push_back((eval.predicted.col(c) - eval.truth.col(c)).squaredNorm() /
                                      static_cast<double>(eval.truth.rows()));
    }
    return eval;
}

}  // namespace sdlearn::nn
