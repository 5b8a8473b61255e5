#include "sdlearn/reproduce.hpp"

#include <sstream>
#include <stdexcept>

#include "sdlearn/report.hpp"

namespace sdlearn {
namespace {

struct Plan {
    SamplingRegime regime;
    TaskSpec task;
    std::vector<double> deltas;
};

std::vector<Plan> plans_for(const std::string& id) {
    const TaskSpec cls{TaskKind::Classification};
    const TaskSpec reg_s{TaskKind::Regression, RegressionTargets::SOnly};
    const TaskSpec reg_all{TaskKind::Regression, RegressionTargets::AllThree};
    if (id == "regimeA-class") return {{SamplingRegime::separated_s(), cls, {}}};
    if (id == "regimeB-class") return {{SamplingRegime::adjacent_s(), cls, {}}};
    if (id == "fig4-sweep") return {{SamplingRegime::varying_all(0.0), cls, {}}};
    if (id == "fig5-regression") {
        return {{SamplingRegime::separated_s(), reg_s, {}}, {SamplingRegime::adjacent_s(), reg_s, {}}};
    }
    if (id == "fig6-sweep") return {{SamplingRegime::varying_all(0.0), reg_all, {}}};
    if (id == "fig7-shortest") return {{SamplingRegime::varying_all(0.2), reg_all, {0.2}}};
    if (id == "fig7-largest") return {{SamplingRegime::varying_all(1.8), reg_all, {1.8}}};
    std::string valid;
    for (const ReproduceTarget& t : reproduce_targets()) valid += (valid.empty() ? "" : ", ") + t.id;
    throw std::invalid_argument("unknown experiment '" + id + "'; valid identifiers: " + valid);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

const std::vector<ReproduceTarget>& reproduce_targets() {
    static const std::vector<ReproduceTarget> targets{
        {"regimeA-class", "classification, separated s intervals, 500 iterations"},
        {"regimeB-class", "classification, adjacent s intervals, 5000 iterations"},
        {"fig4-sweep", "classification accuracy vs delta, varying eta and omega_c, 2e4 iterations per point"},
        {"fig5-regression", "s regression at fixed eta and omega_c, both s-interval regimes, 1e3 iterations"},
        {"fig6-sweep", "(s, eta, omega_c) regression MSE vs delta, 2e4 iterations per point (1e5 with --paper-scale)"},
        {"fig7-shortest", "(s, eta, omega_c) regression at delta = 0.2"},
        {"fig7-largest", "(s, eta, omega_c) regression at delta = 1.8"},
    };
    return targets;
}

std::vector<ReproduceOutcome> reproduce(const std::string& id, const RunConfig& base,
                                        const ReproduceOptions& options) {
    std::vector<ReproduceOutcome> outcomes;
    for (const Plan& plan : plans_for(id)) {
        RunConfig c = base;
        c.regime = plan.regime;
        c.task = plan.task;
        c.hidden.reset();
        c.iterations = options.iterations;
        const nn::MlpSpec spec = c.network_spec();
        const nn::TrainConfig train = c.train_config(options.paper_scale);
        RunOptions run{plan.deltas.empty() ? options.deltas : plan.deltas, options.progress};

        if (plan.task.kind == TaskKind::Classification) {
            const ClassificationReport report = run_classification(c.regime, spec, train, c.data_seed, c.setup, run);
            const auto dir = emit_report(report, options.out_dir);
            for (const ClassificationPoint& p : report.points) {
                outcomes.push_back({dir, id + " " + std::string(to_string(c.regime.kind)) + " delta=" + fmt(p.delta) +
                                             ": train accuracy " + fmt(p.train_accuracy) + ", test accuracy " +
                                             fmt(p.test_accuracy)});
            }
        } else {
            const RegressionReport report =
                run_regression(c.regime, c.task.targets, spec, train, c.data_seed, c.setup, run);
            const auto dir = emit_report(report, options.out_dir);
            for (const RegressionPoint& p : report.points) {
                outcomes.push_back({dir, id + " " + std::string(to_string(c.regime.kind)) + " delta=" + fmt(p.delta) +
                                             ": train MSE " + fmt(p.train_mse) + ", test MSE " + fmt(p.test_mse)});
            }
        }
    }
    return outcomes;
}

}  // namespace sdlearn
