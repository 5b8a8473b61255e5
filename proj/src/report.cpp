#include "sdlearn/report.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "sdlearn/archive.hpp"

namespace sdlearn {
namespace {

constexpr const char* kReportSchema = "sdlearn-report/1";

Json interval_json(const Interval& i) { return Json::array({i.lo, i.hi}); }

Json history_json(const nn::HistoryRow& h) {
    Json j;
    j["iteration"] = h.iteration;
    j["train_loss"] = h.train_loss;
    j["valid_loss"] = h.valid_loss;
    j["train_metric"] = h.train_metric;
    j["valid_metric"] = h.valid_metric;
    return j;
}

std::string history_csv(const std::vector<std::pair<double, const std::vector<nn::HistoryRow>*>>& by_delta) {
    std::ostringstream os;
    os << "delta,iteration,train_loss,valid_loss,train_metric,valid_metric\n";
    for (const auto& [delta, rows] : by_delta) {
        for (const nn::HistoryRow& h : *rows) {
            os << csv_number(delta) << ',' << h.iteration << ',' << csv_number(h.train_loss) << ','
               << csv_number(h.valid_loss) << ',' << csv_number(h.train_metric) << ','
               << csv_number(h.valid_metric) << '\n';
        }
    }
    return os.str();
}

Json header_json(std::string_view kind, const SamplingRegime& regime, std::uint64_t seed,
                 const nn::TrainConfig& config, const Json& cfg) {
    Json j;
    j["schema"] = kReportSchema;
    j["kind"] = kind;
    j["regime"] = to_string(regime.kind);
    j["seed"] = seed;
    j["iterations"] = config.iterations;
    j["config_hash"] = git_blob_hash(cfg.dump());
    j["config"] = cfg;
    return j;
}

std::filesystem::path make_report_dir(const std::filesystem::path& out_dir, const SamplingRegime& regime,
                                      std::uint64_t seed, const Json& cfg) {
    const std::filesystem::path dir = out_dir / report_dir_name(regime, seed, cfg);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create report directory " + dir.string() + ": " + ec.message());
    return dir;
}

}  // namespace

Json config_json(const SamplingRegime& regime, const ExperimentSetup& setup, const nn::MlpSpec& spec,
                 const nn::TrainConfig& config, const TaskSpec& task, std::uint64_t seed,
                 const std::vector<double>& deltas) {
    Json j;
    j["regime"] = {{"kind", to_string(regime.kind)},
                   {"delta", regime.delta},
                   {"deltas", deltas},
                   {"sub_s", interval_json(regime.sub_s)},
                   {"super_s", interval_json(regime.super_s)},
                   {"eta", regime.eta},
                   {"omega_c", regime.omega_c}};
    j["grid"] = {{"t_min", setup.grid.t_min}, {"t_max", setup.grid.t_max}, {"n_points", setup.grid.n_points}};
    if (setup.bath.is_zero_temperature()) {
        j["bath"] = {{"temperature", "zero"}};
    } else {
        j["bath"] = {{"temperature", "finite"}, {"beta", setup.bath.beta()}};
    }
    j["init"] = {{"rho00", setup.init.rho00},
                 {"rho01_re", setup.init.rho01.real()},
                 {"rho01_im", setup.init.rho01.imag()},
                 {"omega0", setup.init.omega0}};
    j["splits"] = {{"n_train", setup.sizes.n_train}, {"n_valid", setup.sizes.n_valid}, {"n_test", setup.sizes.n_test}};
    j["quadrature_tol"] = setup.quadrature_tol;
    j["task"] = {{"kind", to_string(task.kind)}, {"targets", task.target_names()}};
    j["network"] = {{"layer_widths", spec.layer_widths}, {"head", nn::to_string(spec.head)}};
    j["training"] = {{"iterations", config.iterations},
                     {"learning_rate", config.adam.lr},
                     {"beta1", config.adam.beta1},
                     {"beta2", config.adam.beta2},
                     {"epsilon", config.adam.epsilon},
                     {"loss", nn::to_string(config.loss)},
                     {"eval_every", config.eval_every}};
    j["seeds"] = {{"data", seed}, {"init", config.seed}};
    return j;
}

std::string git_blob_hash(const std::string& text) {
    const std::string object = "blob " + std::to_string(text.size()) + '\0' + text;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(object.data(), object.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
        throw std::runtime_error("SHA-1 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string report_dir_name(const SamplingRegime& regime, std::uint64_t seed, const Json& config) {
    return std::string(to_string(regime.kind)) + "_seed" + std::to_string(seed) + "_" +
           git_blob_hash(config.dump()).substr(0, 12);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoFailure("failed writing " + path.string());
}

std::string csv_number(double v) { return format_double(v); }

std::string confusion_csv(const std::vector<std::pair<std::string, Eigen::MatrixXi>>& labelled) {
    std::ostringstream os;
    os << "label,true_class,predicted_class,count\n";
    for (const auto& [label, m] : labelled) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                os << label << ',' << to_string(ohmicity_class_from_id(static_cast<int>(r))) << ','
                   << to_string(ohmicity_class_from_id(static_cast<int>(c))) << ',' << m(r, c) << '\n';
            }
        }
    }
    return os.str();
}

std::string scatter_csv(const std::vector<std::pair<double, const std::vector<PredictionPair>*>>& by_delta) {
    std::ostringstream os;
    os << "delta,index,predicted,truth,error\n";
    for (const auto& [delta, pairs] : by_delta) {
        for (std::size_t i = 0; i < pairs->size(); ++i) {
            const PredictionPair& p = (*pairs)[i];
            os << csv_number(delta) << ',' << i << ',' << csv_number(p.predicted) << ',' << csv_number(p.truth)
               << ',' << csv_number(p.predicted - p.truth) << '\n';
        }
    }
    return os.str();
}

std::string histogram_csv(const std::vector<std::pair<double, const Histogram*>>& by_delta) {
    std::ostringstream os;
    os << "delta,bin,lower,upper,count,percent\n";
    for (const auto& [delta, h] : by_delta) {
        for (std::size_t b = 0; b < h->counts.size(); ++b) {
            os << csv_number(delta) << ',' << b << ',' << csv_number(h->edges[b]) << ','
               << csv_number(h->edges[b + 1]) << ',' << h->counts[b] << ',' << csv_number(h->percentages[b])
               << '\n';
        }
    }
    return os.str();
}

Json histogram_json(const Histogram& h) {
    return {{"edges", h.edges}, {"counts", h.counts}, {"percentages", h.percentages}, {"retained", h.retained}};
}

Json confusion_json(const Eigen::MatrixXi& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path emit_report(const ClassificationReport& report, const std::filesystem::path& out_dir) {
    std::vector<double> deltas;
    for (const ClassificationPoint& p : report.points) deltas.push_back(p.delta);
    const Json cfg = config_json(report.regime, report.setup, report.spec, report.config,
                                 TaskSpec{TaskKind::Classification}, report.seed, deltas);
    const std::filesystem::path dir = make_report_dir(out_dir, report.regime, report.seed, cfg);

    Json j = header_json("classification", report.regime, report.seed, report.config, cfg);
    j["points"] = Json::array();
    std::ostringstream acc;
    acc << "delta,data_seed,init_seed,train_accuracy,valid_accuracy,test_accuracy\n";
    std::vector<std::pair<std::string, Eigen::MatrixXi>> confusions;
    std::vector<std::pair<double, const std::vector<nn::HistoryRow>*>> histories;
    for (const ClassificationPoint& p : report.points) {
        Json pj;
        pj["delta"] = p.delta;
        pj["data_seed"] = p.data_seed;
        pj["init_seed"] = p.init_seed;
        pj["train_accuracy"] = p.train_accuracy;
        pj["valid_accuracy"] = p.valid_accuracy;
        pj["test_accuracy"] = p.test_accuracy;
        pj["train_confusion"] = confusion_json(p.train_confusion);
        pj["test_confusion"] = confusion_json(p.test_confusion);
        if (!p.history.empty()) pj["final"] = history_json(p.history.back());
        j["points"].push_back(pj);
        acc << csv_number(p.delta) << ',' << p.data_seed << ',' << p.init_seed << ','
            << csv_number(p.train_accuracy) << ',' << csv_number(p.valid_accuracy) << ','
            << csv_number(p.test_accuracy) << '\n';
        confusions.emplace_back("delta=" + csv_number(p.delta) + " train", p.train_confusion);
        confusions.emplace_back("delta=" + csv_number(p.delta) + " test", p.test_confusion);
        histories.emplace_back(p.delta, &p.history);
    }
    write_text_file(dir / "report.json", j.dump(2) + "\n");
    write_text_file(dir / "accuracy_vs_delta.csv", acc.str());
    write_text_file(dir / "confusion.csv", confusion_csv(confusions));
    write_text_file(dir / "history.csv", history_csv(histories));
    return dir;
}

std::filesystem::path emit_report(const RegressionReport& report, const std::filesystem::path& out_dir) {
    const TaskSpec task{TaskKind::Regression, report.targets};
    std::vector<double> deltas;
    for (const RegressionPoint& p : report.points) deltas.push_back(p.delta);
    const Json cfg = config_json(report.regime, report.setup, report.spec, report.config, task, report.seed, deltas);
    const std::filesystem::path dir = make_report_dir(out_dir, report.regime, report.seed, cfg);
    const std::vector<std::string> names = task.target_names();

    Json j = header_json("regression", report.regime, report.seed, report.config, cfg);
    j["targets"] = names;
    j["points"] = Json::array();
    std::ostringstream mse;
    mse << "delta,data_seed,init_seed,train_mse,valid_mse,test_mse";
    for (const std::string& n : names) mse << ",train_mse_" << n << ",test_mse_" << n;
    mse << '\n';
    std::vector<std::pair<double, const std::vector<nn::HistoryRow>*>> histories;
    for (const RegressionPoint& p : report.points) {
        Json pj;
        pj["delta"] = p.delta;
        pj["data_seed"] = p.data_seed;
        pj["init_seed"] = p.init_seed;
        pj["train_mse"] = p.train_mse;
        pj["valid_mse"] = p.valid_mse;
        pj["test_mse"] = p.test_mse;
        Json tj = Json::object();
        for (const TargetResult& t : p.targets) {
            tj[t.name] = {{"train_mse", t.train_mse}, {"test_mse", t.test_mse},
                          {"histogram", histogram_json(t.histogram)}};
        }
        pj["targets"] = tj;
        if (!p.history.empty()) pj["final"] = history_json(p.history.back());
        j["points"].push_back(pj);
        mse << csv_number(p.delta) << ',' << p.data_seed << ',' << p.init_seed << ',' << csv_number(p.train_mse)
            << ',' << csv_number(p.valid_mse) << ',' << csv_number(p.test_mse);
        for (const TargetResult& t : p.targets) mse << ',' << csv_number(t.train_mse) << ',' << csv_number(t.test_mse);
        mse << '\n';
        histories.emplace_back(p.delta, &p.history);
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
        std::vector<std::pair<double, const std::vector<PredictionPair>*>> pairs;
        std::vector<std::pair<double, const Histogram*>> hists;
        for (const RegressionPoint& p : report.points) {
            pairs.emplace_back(p.delta, &p.targets[c].test_pairs);
            hists.emplace_back(p.delta, &p.targets[c].histogram);
        }
        write_text_file(dir / ("scatter_" + names[c] + ".csv"), scatter_csv(pairs));
        write_text_file(dir / ("histogram_" + names[c] + ".csv"), histogram_csv(hists));
    }
    write_text_file(dir / "report.json", j.dump(2) + "\n");
    write_text_file(dir / "mse_vs_delta.csv", mse.str());
    write_text_file(dir / "history.csv", history_csv(histories));
    return dir;
}

}  // namespace sdlearn
