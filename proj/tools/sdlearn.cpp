// sdlearn: generate dephasing datasets, train and evaluate spectral-density
// classifiers and regressors, and run the named reproduction experiments.
#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "sdlearn/archive.hpp"
#include "sdlearn/checkpoint.hpp"
#include "sdlearn/config.hpp"
#include "sdlearn/dataset.hpp"
#include "sdlearn/dft.hpp"
#include "sdlearn/experiment.hpp"
#include "sdlearn/report.hpp"
#include "sdlearn/reproduce.hpp"

namespace fs = std::filesystem;
using namespace sdlearn;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfigError = 2, kDataError = 3, kNumericalError = 4 };

// Inputs that are well-formed on their own but do not fit together.
class DataMismatch : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;
};

RunConfig effective_config(const Globals& g) {
    RunConfig c = g.config_path.empty() ? RunConfig{} : load_run_config(g.config_path);
    if (g.seed) {
        c.data_seed = *g.seed;
        c.init_seed = *g.seed;
    }
    if (g.threads) c.setup.threads = *g.threads;
    return c;
}

fs::path output_root(const Globals& g, const RunConfig& c) {
    if (!g.out.empty()) return g.out;
    if (!c.output_dir.empty()) return c.output_dir;
    if (const char* env = std::getenv("SDLEARN_OUT"); env && *env) return env;
    return "sdlearn-out";
}

void ensure_parent(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

std::string hex(std::uint64_t v) { return hex64(v); }

void log(const std::string& msg) { std::cerr << msg << std::endl; }

void check_dataset_task(const LabeledDataset& ds, const TaskSpec& task, const std::string& what) {
    const std::string tag = ds.manifest.task;
    if (tag != "any" && tag != std::string(to_string(task.kind))) {
        throw DataMismatch(what + " is a " + std::string(to_string(task.kind)) + " model but the dataset was generated for " +
                           tag);
    }
    try {
        check_task_compatible(ds.manifest.regime, task);
    } catch (const std::invalid_argument& e) {
        throw DataMismatch(std::string("dataset regime ") + std::string(to_string(ds.manifest.regime.kind)) + ": " +
                           e.what());
    }
}

TaskSpec task_of(const ModelMeta& meta) {
    TaskSpec t{task_kind_from_string(meta.task)};
    if (t.kind == TaskKind::Regression) {
        t.targets = meta.targets.size() == 1 ? RegressionTargets::SOnly : RegressionTargets::AllThree;
    }
    return t;
}

// ---- generate -------------------------------------------------------------

int cmd_generate(const Globals& g, const std::string& out_arg, const std::string& csv_path) {
    const RunConfig c = effective_config(g);
    const fs::path out = out_arg.empty()
                             ? output_root(g, c) / ("dataset_" + std::string(to_string(c.regime.kind)) + "_seed" +
                                                    std::to_string(c.data_seed) + ".sdd")
                             : fs::path(out_arg);
    log("generating " + std::to_string(c.setup.sizes.total()) + " trajectories (" +
        std::string(to_string(c.regime.kind)) + ", seed " + std::to_string(c.data_seed) + ")");
    LabeledDataset ds = build_dataset(c.regime, c.setup.sizes, c.setup.grid, c.setup.bath, c.setup.init, c.data_seed,
                                      c.setup.threads, c.setup.quadrature_tol);
    ds.manifest.task = std::string(to_string(c.task.kind));
    ensure_parent(out);
    const std::uint64_t checksum = save_dataset(ds, out);
    if (!csv_path.empty()) export_csv(ds, csv_path);
    std::cout << "dataset: " << out.string() << "\n"
              << "regime: " << to_string(c.regime.kind) << " (s_min " << c.regime.sub_s.lo << ", sub_s_max "
              << c.regime.sub_s.hi << ", super_s_min " << c.regime.super_s.lo << ", s_max " << c.regime.super_s.hi
              << ", eta " << c.regime.eta << ", omega_c " << c.regime.omega_c << ", delta " << c.regime.delta << ")\n"
              << "examples: " << c.setup.sizes.total() << " (train " << c.setup.sizes.n_train << ", valid "
              << c.setup.sizes.n_valid << ", test " << c.setup.sizes.n_test << "), " << c.setup.grid.n_points
              << " points each\n"
              << "checksum: " << hex(checksum) << std::endl;
    return kOk;
}

// ---- train ----------------------------------------------------------------

int cmd_train(const Globals& g, const std::string& dataset_path, const std::string& model_arg) {
    RunConfig c = effective_config(g);
    const LabeledDataset ds = load_dataset(dataset_path);
    const std::size_t n = ds.manifest.grid.n_points;
    if (n != c.setup.grid.n_points) {
        throw DataMismatch("dataset has " + std::to_string(n) + " points per trajectory but the configured network input is " +
                           std::to_string(2 * c.setup.grid.n_points) + " (grid.n_points = " +
                           std::to_string(c.setup.grid.n_points) + ")");
    }
    check_dataset_task(ds, c.task, "config task");
    c.regime = ds.manifest.regime;  // network and budget defaults follow the data
    const nn::MlpSpec spec = c.network_spec();
    const nn::TrainConfig train = c.train_config();

    const fs::path model = model_arg.empty()
                               ? output_root(g, c) / ("model_" + c.task.label() + "_" +
                                                      std::string(to_string(c.regime.kind)) + "_seed" +
                                                      std::to_string(c.init_seed) + ".sdm")
                               : fs::path(model_arg);
    const nn::TrainingData data = make_training_data(ds, c.task);
    log("training " + std::to_string(train.iterations) + " iterations, layers " +
        [&] {
            std::string s;
            for (auto w : spec.layer_widths) s += (s.empty() ? "" : "-") + std::to_string(w);
            return s;
        }());
    const nn::TrainResult result = nn::train(spec, data, train, [](const nn::HistoryRow& h) {
        std::ostringstream os;
        os << "  iter " << h.iteration << "  train loss " << h.train_loss << "  valid loss " << h.valid_loss
           << "  train metric " << h.train_metric << "  valid metric " << h.valid_metric;
        if (h.test_metric) os << "  test metric " << *h.test_metric;
        log(os.str());
    });

    ModelMeta meta;
    meta.seed = train.seed;
    meta.iterations = train.iterations;
    meta.loss = train.loss;
    meta.task = std::string(to_string(c.task.kind));
    meta.targets = c.task.target_names();
    meta.n_points = n;
    ensure_parent(model);
    const std::uint64_t checksum = save_checkpoint({spec, result.params, meta}, model);

    fs::path history = model;
    history += ".history.csv";
    std::ostringstream os;
    os << "iteration,train_loss,valid_loss,train_metric,valid_metric,test_loss,test_metric\n";
    for (const nn::HistoryRow& h : result.history) {
        os << h.iteration << ',' << csv_number(h.train_loss) << ',' << csv_number(h.valid_loss) << ','
           << csv_number(h.train_metric) << ',' << csv_number(h.valid_metric) << ','
           << (h.test_loss ? csv_number(*h.test_loss) : "") << ',' << (h.test_metric ? csv_number(*h.test_metric) : "")
           << '\n';
    }
    write_text_file(history, os.str());
    const nn::HistoryRow& last = result.history.back();
    std::cout << "model: " << model.string() << "\nhistory: " << history.string() << "\n"
              << (c.task.kind == TaskKind::Classification ? "final train accuracy: " : "final train mse: ")
              << last.train_metric << "\n"
              << "checksum: " << hex(checksum) << std::endl;
    return kOk;
}

// ---- evaluate -------------------------------------------------------------

int cmd_evaluate(const Globals& g, const std::string& model_path, const std::string& dataset_path,
                 const std::string& split_name) {
    const RunConfig c = effective_config(g);
    const Checkpoint ckpt = load_checkpoint(model_path);
    const LabeledDataset ds = load_dataset(dataset_path);
    const TaskSpec task = task_of(ckpt.meta);
    check_dataset_task(ds, task, "checkpoint");
    if (ds.manifest.grid.n_points != ckpt.meta.n_points) {
        throw DataMismatch("model expects " + std::to_string(ckpt.meta.n_points) + "-point trajectories, dataset has " +
                           std::to_string(ds.manifest.grid.n_points));
    }
    const Split split = split_from_string(split_name);
    const nn::SplitData data = make_split(ds.split(split), task);
    const std::string stem = fs::path(model_path).stem().string();
    const fs::path dir = output_root(g, c) / ("evaluate_" + stem + "_" + split_name);
    fs::create_directories(dir);

    Json j;
    j["schema"] = "sdlearn-evaluation/1";
    j["model"] = fs::path(model_path).filename().string();
    j["dataset"] = fs::path(dataset_path).filename().string();
    j["split"] = split_name;
    j["task"] = task.label();
    if (task.kind == TaskKind::Classification) {
        const auto ev = nn::evaluate_classification(ckpt.params, ckpt.spec, data);
        j["accuracy"] = ev.accuracy;
        j["confusion"] = confusion_json(ev.confusion);
        write_text_file(dir / "confusion.csv", confusion_csv({{split_name, ev.confusion}}));
        std::cout << "split: " << split_name << "\naccuracy: " << ev.accuracy << "\n";
    } else {
        const auto ev = nn::evaluate_regression(ckpt.params, ckpt.spec, data);
        const auto& examples = ds.split(split);
        j["mse"] = ev.mse;
        const auto names = task.target_names();
        std::cout << "split: " << split_name << "\nmse: " << ev.mse << "\n";
        for (std::size_t t = 0; t < names.size(); ++t) {
            std::vector<PredictionPair> pairs;
            for (std::size_t r = 0; r < examples.size(); ++r) {
                const auto row = static_cast<Eigen::Index>(r);
                const auto col = static_cast<Eigen::Index>(t);
                pairs.push_back({ev.predicted(row, col), ev.truth(row, col), examples[r].targets().s == 1.0});
            }
            const Histogram h = error_histogram(pairs, default_error_bin_edges(pairs),
                                                names[t] == "s" && ds.manifest.regime.fixed_coupling());
            j["targets"][names[t]] = {{"mse", ev.per_target_mse[t]}, {"histogram", histogram_json(h)}};
            write_text_file(dir / ("scatter_" + names[t] + ".csv"), scatter_csv({{ds.manifest.regime.delta, &pairs}}));
            write_text_file(dir / ("histogram_" + names[t] + ".csv"), histogram_csv({{ds.manifest.regime.delta, &h}}));
            std::cout << "mse_" << names[t] << ": " << ev.per_target_mse[t] << "\n";
        }
    }
    write_text_file(dir / "metrics.json", j.dump(2) + "\n");
    std::cout << "report: " << dir.string() << std::endl;
    return kOk;
}

// ---- predict --------------------------------------------------------------

std::vector<double> read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataMismatch(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,value") throw DataMismatch(path + ": expected header 't,value', got '" + line + "'");
    std::vector<double> values;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataMismatch(path + ":" + std::to_string(lineno) + ": expected t,value");
        const std::string field = line.substr(comma + 1);
        double v = 0.0;
        auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || end != field.data() + field.size()) {
            throw DataMismatch(path + ":" + std::to_string(lineno) + ": cannot parse value '" + field + "'");
        }
        if (!std::isfinite(v)) throw DataMismatch(path + ":" + std::to_string(lineno) + ": non-finite sample");
        values.push_back(v);
    }
    return values;
}

int cmd_predict(const std::string& model_path, const std::string& csv_path) {
    const Checkpoint ckpt = load_checkpoint(model_path);
    const std::vector<double> values = read_trajectory_csv(csv_path);
    if (values.size() != ckpt.meta.n_points) {
        throw DataMismatch("trajectory has " + std::to_string(values.size()) + " samples, model expects " +
                           std::to_string(ckpt.meta.n_points));
    }
    const FeatureVector f = featurize(values);
    const nn::Matrix x = Eigen::Map<const Eigen::RowVectorXd>(f.values.data(), static_cast<Eigen::Index>(f.values.size()));
    const nn::Matrix out = nn::predict(ckpt.params, ckpt.spec, x);
    Json j;
    const TaskSpec task = task_of(ckpt.meta);
    if (task.kind == TaskKind::Classification) {
        Eigen::Index best = 0;
        out.row(0).maxCoeff(&best);
        j["class"] = to_string(ohmicity_class_from_id(static_cast<int>(best)));
        Json probs;
        for (Eigen::Index k = 0; k < out.cols(); ++k) {
            probs[std::string(to_string(ohmicity_class_from_id(static_cast<int>(k))))] = out(0, k);
        }
        j["probabilities"] = probs;
    } else {
        for (std::size_t t = 0; t < ckpt.meta.targets.size(); ++t) {
            j[ckpt.meta.targets[t]] = out(0, static_cast<Eigen::Index>(t));
        }
    }
    std::cout << j.dump() << std::endl;
    return kOk;
}

// ---- trajectory -----------------------------------------------------------

int cmd_trajectory(const Globals& g, double s, double eta, double omega_c, const std::string& out_path) {
    const RunConfig c = effective_config(g);
    const Trajectory tr = generate_trajectory(Observable::SigmaX, c.setup.grid, c.setup.init,
                                              SpectralParams(s, eta, omega_c), c.setup.bath, c.setup.quadrature_tol);
    std::ostringstream os;
    os << "t,value\n";
    for (std::size_t n = 0; n < tr.values.size(); ++n) {
        os << csv_number(c.setup.grid.time(n)) << ',' << csv_number(tr.values[n]) << '\n';
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << os.str();
    } else {
        ensure_parent(out_path);
        write_text_file(out_path, os.str());
    }
    return kOk;
}

// ---- reproduce ------------------------------------------------------------

int cmd_reproduce(const Globals& g, const std::string& id, bool list, bool paper_scale,
                  std::optional<std::int64_t> iterations, const std::vector<double>& deltas) {
    if (list || id.empty()) {
        for (const ReproduceTarget& t : reproduce_targets()) std::cout << t.id << "  " << t.description << "\n";
        return list ? kOk : kConfigError;
    }
    const RunConfig c = effective_config(g);
    ReproduceOptions opt;
    opt.out_dir = output_root(g, c);
    opt.paper_scale = paper_scale;
    opt.iterations = iterations;
    opt.deltas = deltas;
    opt.progress = log;
    for (const ReproduceOutcome& o : reproduce(id, c, opt)) {
        std::cout << o.summary << "\n  report: " << o.report_dir.string() << "\n";
    }
    std::cout.flush();
    return kOk;
}

std::string help_footer() {
    std::string s = "\nConfiguration keys (INI sections; every key optional, default shown):\n";
    s += describe_config_keys();
    s += "\nOutput root: --out, else [output] dir, else $SDLEARN_OUT, else ./sdlearn-out\n";
    s += "Exit codes: 0 success, 1 other failure, 2 configuration or usage error, 3 data error, 4 numerical failure\n";
    s += "\nReproduction identifiers:\n";
    for (const ReproduceTarget& t : reproduce_targets()) s += "  " + t.id + "  " + t.description + "\n";
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn spin-boson spectral densities from pure-dephasing qubit trajectories"};
    app.footer(help_footer());
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "override seeds.data and seeds.init");
    app.add_option("--threads", g.threads, "dataset-generation workers")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output root directory");

    std::string gen_out, gen_csv;
    auto* gen = app.add_subcommand("generate", "build a labelled dataset and print its checksum");
    gen->add_option("output", gen_out, "dataset file (default <out>/dataset_<regime>_seed<seed>.sdd)");
    gen->add_option("--csv", gen_csv, "also export the dataset as CSV");

    std::string train_data, train_model;
    auto* tr = app.add_subcommand("train", "train a network on a dataset; writes a checkpoint and history CSV");
    tr->add_option("dataset", train_data, "dataset file")->required()->check(CLI::ExistingFile);
    tr->add_option("model", train_model, "checkpoint path (default <out>/model_<task>_<regime>_seed<seed>.sdm)");

    std::string ev_model, ev_data, ev_split = "test";
    auto* ev = app.add_subcommand("evaluate", "metrics of a checkpoint on one dataset split");
    ev->add_option("model", ev_model, "checkpoint file")->required()->check(CLI::ExistingFile);
    ev->add_option("dataset", ev_data, "dataset file")->required()->check(CLI::ExistingFile);
    ev->add_option("--split", ev_split, "train, valid or test")->check(CLI::IsMember({"train", "valid", "test"}));

    std::string pr_model, pr_csv;
    auto* pr = app.add_subcommand("predict", "class probabilities or (s, eta, omega_c) for one trajectory CSV");
    pr->add_option("model", pr_model, "checkpoint file")->required()->check(CLI::ExistingFile);
    pr->add_option("trajectory", pr_csv, "CSV with header t,value")->required()->check(CLI::ExistingFile);

    double tj_s = 1.0, tj_eta = 0.25, tj_wc = 0.5;
    std::string tj_out;
    auto* tj = app.add_subcommand("trajectory", "write the <sigma_x> trajectory of one spectral density as t,value CSV");
    tj->add_option("--s", tj_s, "Ohmicity exponent")->capture_default_str();
    tj->add_option("--eta", tj_eta, "coupling strength")->capture_default_str();
    tj->add_option("--omega-c", tj_wc, "cut-off frequency")->capture_default_str();
    tj->add_option("output", tj_out, "CSV path (default stdout)");

    std::string rp_id;
    bool rp_list = false, rp_paper = false;
    std::optional<std::int64_t> rp_iters;
    std::vector<double> rp_deltas;
    auto* rp = app.add_subcommand("reproduce", "run a named experiment end to end and write its report");
    rp->add_option("experiment", rp_id, "experiment identifier (see --list)");
    rp->add_flag("--list", rp_list, "list experiment identifiers");
    rp->add_flag("--paper-scale", rp_paper, "use the long iteration budget for varying-parameter regression");
    rp->add_option("--iterations", rp_iters, "override the iteration budget")->check(CLI::NonNegativeNumber);
    rp->add_option("--deltas", rp_deltas, "subset of sweep deltas")->delimiter(',');

    auto* cfg = app.add_subcommand("config", "print the effective configuration as INI");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*gen) return cmd_generate(g, gen_out, gen_csv);
        if (*tr) return cmd_train(g, train_data, train_model);
        if (*ev) return cmd_evaluate(g, ev_model, ev_data, ev_split);
        if (*pr) return cmd_predict(pr_model, pr_csv);
        if (*tj) return cmd_trajectory(g, tj_s, tj_eta, tj_wc, tj_out);
        if (*rp) return cmd_reproduce(g, rp_id, rp_list, rp_paper, rp_iters, rp_deltas);
        if (*cfg) {
            std::cout << to_ini(effective_config(g));
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return kConfigError;
    } catch (const QuadratureNotConverged& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return kNumericalError;
    } catch (const nn::TrainingDiverged& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return kNumericalError;
    } catch (const SweepPointDiverged& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return kNumericalError;
    } catch (const DataMismatch& e) {
        std::cerr << "data error: " << e.what() << std::endl;
        return kDataError;
    } catch (const nn::ShapeMismatch& e) {
        std::cerr << "data error: " << e.what() << std::endl;
        return kDataError;
    } catch (const IoFailure& e) {
        std::cerr << "data error: " << e.what() << std::endl;
        return kDataError;
    } catch (const CorruptFile& e) {
        std::cerr << "data error: " << e.what() << std::endl;
        return kDataError;
    } catch (const VersionMismatch& e) {
        std::cerr << "data error: " << e.what() << std::endl;
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kOther;
    }
    return kOther;
}
