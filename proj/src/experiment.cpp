#include "sdlearn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sdlearn {
namespace {

constexpr int kErrorBins = 13;

std::uint64_t delta_key(double delta) { return static_cast<std::uint64_t>(std::llround(delta * 1e6)); }

struct PointPlan {
    SamplingRegime regime;
    std::uint64_t data_seed;
    std::uint64_t init_seed;
};

std::vector<PointPlan> plan_points(const SamplingRegime& regime, std::uint64_t seed,
                                   std::uint64_t init_seed, const RunOptions& options) {
    regime.validate();
    if (regime.fixed_coupling()) return {{regime, seed, init_seed}};
    std::vector<PointPlan> plan;
    for (double delta : options.deltas.empty() ? delta_sweep() : options.deltas) {
        SamplingRegime point = regime;
        point.delta = delta;
        point.validate();
        plan.push_back({point, derive_seed(seed, 0, delta_key(delta)),
                        derive_seed(init_seed, 1, delta_key(delta))});
    }
    return plan;
}

LabeledDataset build_for(const PointPlan& point, const ExperimentSetup& setup) {
    return build_dataset(point.regime, setup.sizes, setup.grid, setup.bath, setup.init,
                         point.data_seed, setup.threads, setup.quadrature_tol);
}

void say(const RunOptions& options, const std::string& msg) {
    if (options.progress) options.progress(msg);
}

std::string point_label(const SamplingRegime& r) {
    std::ostringstream os;
    os << to_string(r.kind);
    if (!r.fixed_coupling()) os << " delta=" << r.delta;
    return os.str();
}

}  // namespace

std::string_view to_string(TaskKind k) { return k == TaskKind::Classification ? "classification" : "regression"; }

std::string_view to_string(RegressionTargets t) { return t == RegressionTargets::SOnly ? "s" : "all"; }

TaskKind task_kind_from_string(std::string_view s) {
    if (s == "classification") return TaskKind::Classification;
    if (s == "regression") return TaskKind::Regression;
    throw std::invalid_argument("unknown task '" + std::string(s) + "' (classification, regression)");
}

RegressionTargets regression_targets_from_string(std::string_view s) {
    if (s == "s") return RegressionTargets::SOnly;
    if (s == "all") return RegressionTargets::AllThree;
    throw std::invalid_argument("unknown regression targets '" + std::string(s) + "' (s, all)");
}

nn::Index TaskSpec::output_width() const {
    if (kind == TaskKind::Classification) return kNumClasses;
    return targets == RegressionTargets::SOnly ? 1 : 3;
}

std::vector<std::string> TaskSpec::target_names() const {
    if (kind == TaskKind::Classification) return {};
    if (targets == RegressionTargets::SOnly) return {"s"};
    return {"s", "eta", "omega_c"};
}

std::string TaskSpec::label() const {
    if (kind == TaskKind::Classification) return "classification";
    return std::string("regression_") + std::string(to_string(targets));
}

std::vector<nn::Index> default_hidden_widths(const SamplingRegime& regime, const TaskSpec& task) {
    if (task.kind == TaskKind::Regression && !regime.fixed_coupling()) {
        return {250, 250, 250, 250, 250, 80};
    }
    return {250, 80};
}

nn::MlpSpec default_spec(const SamplingRegime& regime, const TaskSpec& task, std::size_t n_points) {
    nn::MlpSpec spec;
    spec.layer_widths.push_back(static_cast<nn::Index>(2 * n_points));
    for (nn::Index w : default_hidden_widths(regime, task)) spec.layer_widths.push_back(w);
    spec.layer_widths.push_back(task.output_width());
    spec.head = task.head();
    return spec;
}

std::int64_t default_iterations(const SamplingRegime& regime, const TaskSpec& task, bool paper_scale) {
    if (task.kind == TaskKind::Classification) {
        switch (regime.kind) {
            case RegimeKind::SeparatedS: return 500;
            case RegimeKind::AdjacentS: return 5000;
            case RegimeKind::VaryingAll: return 20000;
        }
    }
    if (regime.fixed_coupling()) return 1000;
    return paper_scale ? 100000 : 20000;
}

nn::SplitData make_split(const std::vector<LabeledExample>& examples, const TaskSpec& task) {
    std::vector<std::span<const double>> samples;
    samples.reserve(examples.size());
    for (const LabeledExample& ex : examples) samples.emplace_back(ex.trajectory.values);
    nn::SplitData split;
    split.inputs = feature_matrix(samples);
    const auto rows = static_cast<nn::Index>(examples.size());
    split.targets = nn::Matrix::Zero(rows, task.output_width());
    for (nn::Index r = 0; r < rows; ++r) {
        const LabeledExample& ex = examples[static_cast<std::size_t>(r)];
        if (task.kind == TaskKind::Classification) {
            split.targets(r, static_cast<int>(ex.class_label)) = 1.0;
        } else {
            split.targets(r, 0) = ex.targets().s;
            if (task.targets == RegressionTargets::AllThree) {
                split.targets(r, 1) = ex.targets().eta;
                split.targets(r, 2) = ex.targets().omega_c;
            }
        }
    }
    return split;
}

nn::TrainingData make_training_data(const LabeledDataset& ds, const TaskSpec& task) {
    nn::TrainingData data;
    data.train = make_split(ds.split(Split::Train), task);
    data.valid = make_split(ds.split(Split::Valid), task);
    data.test = make_split(ds.split(Split::Test), task);
    data.symmetry = hermitian_feature_symmetry(ds.manifest.grid.n_points);
    return data;
}

void check_task_compatible(const SamplingRegime& regime, const TaskSpec& task) {
    if (task.kind != TaskKind::Regression) return;
    if (task.targets == RegressionTargets::SOnly && !regime.fixed_coupling()) {
        throw std::invalid_argument(
            "s-only regression needs fixed eta and omega_c (separated_s or adjacent_s)");
    }
    if (task.targets == RegressionTargets::AllThree && regime.fixed_coupling()) {
        throw std::invalid_argument("three-target regression needs the varying_all regime");
    }
}

ClassificationReport run_classification(const SamplingRegime& regime, const nn::MlpSpec& spec,
                                        const nn::TrainConfig& config, std::uint64_t seed,
                                        const ExperimentSetup& setup, const RunOptions& options) {
    const TaskSpec task{TaskKind::Classification};
    if (spec.head != nn::Head::Softmax) throw std::invalid_argument("classification needs a softmax head");
    ClassificationReport report{regime, setup, spec, config, seed, {}};
    for (const PointPlan& plan : plan_points(regime, seed, config.seed, options)) {
        say(options, "generating dataset: " + point_label(plan.regime));
        const LabeledDataset ds = build_for(plan, setup);
        const nn::TrainingData data = make_training_data(ds, task);
        nn::TrainConfig point_config = config;
        point_config.seed = plan.init_seed;
        say(options, "training " + std::to_string(config.iterations) + " iterations");
        nn::TrainResult trained;
        try {
            trained = nn::train(spec, data, point_config);
        } catch (const nn::TrainingDiverged& e) {
            throw SweepPointDiverged(plan.regime.delta, point_label(plan.regime) + ": " + e.what());
        }
        const auto train_eval = nn::evaluate_classification(trained.params, spec, data.train);
        const auto valid_eval = nn::evaluate_classification(trained.params, spec, data.valid);
        const auto test_eval = nn::evaluate_classification(trained.params, spec, *data.test);
        report.points.push_back({plan.regime.delta, plan.data_seed, plan.init_seed,
                                 train_eval.accuracy, valid_eval.accuracy, test_eval.accuracy,
                                 train_eval.confusion, test_eval.confusion, std::move(trained.history)});
        say(options, point_label(plan.regime) + ": train accuracy " + std::to_string(train_eval.accuracy) +
                         ", test accuracy " + std::to_string(test_eval.accuracy));
    }
    return report;
}

RegressionReport run_regression(const SamplingRegime& regime, RegressionTargets targets,
                                const nn::MlpSpec& spec, const nn::TrainConfig& config,
                                std::uint64_t seed, const ExperimentSetup& setup,
                                const RunOptions& options) {
    const TaskSpec task{TaskKind::Regression, targets};
    check_task_compatible(regime, task);
    if (spec.head != nn::Head::Linear || spec.output_width() != task.output_width()) {
        throw std::invalid_argument("regression spec must have a linear head with one output per target");
    }
    RegressionReport report{regime, setup, spec, config, targets, seed, {}};
    const std::vector<std::string> names = task.target_names();
    for (const PointPlan& plan : plan_points(regime, seed, config.seed, options)) {
        say(options, "generating dataset: " + point_label(plan.regime));
        const LabeledDataset ds = build_for(plan, setup);
        const nn::TrainingData data = make_training_data(ds, task);
        nn::TrainConfig point_config = config;
        point_config.seed = plan.init_seed;
        say(options, "training " + std::to_string(config.iterations) + " iterations");
        nn::TrainResult trained;
        try {
            trained = nn::train(spec, data, point_config);
        } catch (const nn::TrainingDiverged& e) {
            throw SweepPointDiverged(plan.regime.delta, point_label(plan.regime) + ": " + e.what());
        }
        const auto train_eval = nn::evaluate_regression(trained.params, spec, data.train);
        const auto valid_eval = nn::evaluate_regression(trained.params, spec, data.valid);
        const auto test_eval = nn::evaluate_regression(trained.params, spec, *data.test);

        RegressionPoint point{plan.regime.delta, plan.data_seed, plan.init_seed, train_eval.mse,
                              valid_eval.mse, test_eval.mse, {}, std::move(trained.history)};
        const auto& test_examples = ds.split(Split::Test);
        for (std::size_t c = 0; c < names.size(); ++c) {
            TargetResult tr{names[c], train_eval.per_target_mse[c], test_eval.per_target_mse[c], {}, {}};
            for (std::size_t r = 0; r < test_examples.size(); ++r) {
                const auto row = static_cast<nn::Index>(r);
                tr.test_pairs.push_back({test_eval.predicted(row, static_cast<nn::Index>(c)),
                                         test_eval.truth(row, static_cast<nn::Index>(c)),
                                         test_examples[r].targets().s == 1.0});
            }
            const bool dedupe = names[c] == "s" && plan.regime.fixed_coupling();
            tr.histogram = error_histogram(tr.test_pairs, default_error_bin_edges(tr.test_pairs), dedupe);
            point.targets.push_back(std::move(tr));
        }
        say(options, point_label(plan.regime) + ": train MSE " + std::to_string(point.train_mse) +
                         ", test MSE " + std::to_string(point.test_mse));
        report.points.push_back(std::move(point));
    }
    return report;
}

std::vector<double> default_error_bin_edges(const std::vector<PredictionPair>& pairs) {
    double max_abs = 0.0;
    for (const PredictionPair& p : pairs) max_abs = std::max(max_abs, std::abs(p.predicted - p.truth));
    double range = 1.0;
    if (max_abs > 0.0 && std::isfinite(max_abs)) {
        const double magnitude = std::pow(10.0, std::floor(std::log10(max_abs)));
        double lead = std::ceil(max_abs / magnitude);
        range = lead * magnitude;
        if (range < max_abs) range = (lead + 1.0) * magnitude;
    }
    std::vector<double> edges(kErrorBins + 1);
    for (int i = 0; i <= kErrorBins; ++i) edges[i] = -range + 2.0 * range * i / kErrorBins;
    edges.back() = range;
    return edges;
}

Histogram error_histogram(const std::vector<PredictionPair>& pairs, const std::vector<double>& bin_edges,
                          bool dedupe_ohmic) {
    if (pairs.empty()) throw std::invalid_argument("error_histogram: no prediction pairs");
    if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end())) {
        throw std::invalid_argument("error_histogram: need at least two ascending bin edges");
    }
    Histogram h;
    h.edges = bin_edges;
    const std::size_t bins = bin_edges.size() - 1;
    h.counts.assign(bins, 0);
    bool ohmic_seen = false;
    for (const PredictionPair& p : pairs) {
        if (dedupe_ohmic && p.ohmic) {
            if (ohmic_seen) continue;
            ohmic_seen = true;
        }
        const double err = p.predicted - p.truth;
        const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), err);
        std::size_t bin = it == bin_edges.begin() ? 0 : static_cast<std::size_t>(it - bin_edges.begin()) - 1;
        bin = std::min(bin, bins - 1);
        ++h.counts[bin];
        ++h.retained;
    }
    for (std::size_t c : h.counts) {
        h.percentages.push_back(100.0 * static_cast<double>(c) / static_cast<double>(h.retained));
    }
    return h;
}

}  // namespace sdlearn
