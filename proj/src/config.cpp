#include "sdlearn/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sdlearn/archive.hpp"

namespace sdlearn {
namespace {

namespace pt = boost::property_tree;

struct KeyInfo {
    const char* section;
    const char* key;
    const char* default_text;
    const char* help;
};

// Regime defaults shown here are those of adjacent_s; separated_s narrows the
// s intervals and varying_all sets eta = omega_c = 0.25 (interval lower ends).
constexpr KeyInfo kKeys[] = {
    {"regime", "kind", "adjacent_s", "separated_s | adjacent_s | varying_all"},
    {"regime", "s_min", "0.01", "lower end of the sub-Ohmic s interval (separated_s: 0.01)"},
    {"regime", "sub_s_max", "1", "upper end of the sub-Ohmic s interval (separated_s: 0.5)"},
    {"regime", "super_s_min", "1", "lower end of the super-Ohmic s interval (separated_s: 1.5)"},
    {"regime", "s_max", "4", "upper end of the super-Ohmic s interval"},
    {"regime", "eta", "0.25", "coupling strength; lower end of [eta, eta + delta] for varying_all"},
    {"regime", "omega_c", "0.5", "cut-off frequency; varying_all default 0.25, lower end of its interval"},
    {"regime", "delta", "0", "interval length for varying_all (reproduce sweeps 0, 0.2, ..., 1.8)"},
    {"grid", "t_min", "0", "first sample time"},
    {"grid", "t_max", "10", "last sample time"},
    {"grid", "n_points", "400", "samples per trajectory"},
    {"bath", "temperature", "zero", "zero | finite"},
    {"bath", "beta", "1", "inverse temperature, used when temperature = finite"},
    {"init", "rho00", "0.5", "initial excited-state population"},
    {"init", "rho01_re", "0.5", "real part of the initial coherence"},
    {"init", "rho01_im", "0", "imaginary part of the initial coherence"},
    {"init", "omega0", "1", "qubit level splitting"},
    {"splits", "n_train", "4800", "training examples (multiple of 3)"},
    {"splits", "n_valid", "2400", "validation examples (multiple of 3)"},
    {"splits", "n_test", "2400", "test examples (multiple of 3)"},
    {"quadrature", "tol", "1e-08", "relative tolerance of the decoherence-function quadrature"},
    {"task", "kind", "classification", "classification | regression"},
    {"task", "targets", "s", "regression outputs: s (fixed eta, omega_c) | all (varying_all)"},
    {"network", "hidden", "auto", "comma-separated hidden widths; auto = 250,80 (varying_all regression: 250,250,250,250,250,80)"},
    {"train", "iterations", "auto", "full-batch steps; auto = 500 / 5000 / 20000 classification, 1000 / 20000 regression"},
    {"train", "lr", "0.0001", "Adam learning rate"},
    {"train", "beta1", "0.9", "Adam first-moment decay"},
    {"train", "beta2", "0.999", "Adam second-moment decay"},
    {"train", "epsilon", "1e-08", "Adam denominator offset"},
    {"train", "eval_every", "100", "iterations between history rows"},
    {"seeds", "data", "20240601", "dataset master seed"},
    {"seeds", "init", "7", "weight initialisation seed"},
    {"output", "dir", "", "output root; empty uses $SDLEARN_OUT, then ./sdlearn-out"},
    {"runtime", "threads", "1", "dataset-generation workers (results do not depend on it)"},
};

const KeyInfo* find_key(const std::string& section, const std::string& key) {
    for (const KeyInfo& k : kKeys) {
        if (section == k.section && key == k.key) return &k;
    }
    return nullptr;
}

// Maps "section.key" to the line where it is set, for diagnostics.
std::map<std::string, int> key_lines(const std::string& text) {
    std::map<std::string, int> lines;
    std::istringstream in(text);
    std::string line, section;
    int n = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
        } else if (const auto eq = t.find('='); eq != std::string::npos) {
            lines.emplace(section + "." + trim(t.substr(0, eq)), n);
        }
    }
    return lines;
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::string origin, std::map<std::string, int> lines)
        : tree_(tree), origin_(std::move(origin)), lines_(std::move(lines)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        std::string where = origin_;
        if (auto it = lines_.find(path); it != lines_.end()) where += ":" + std::to_string(it->second);
        throw ConfigError(where + ": " + path + ": " + message);
    }

    std::optional<std::string> raw(const std::string& path) const {
        if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
        return std::nullopt;
    }

    void number(const std::string& path, double& out) const {
        if (auto v = raw(path)) {
            double x = 0.0;
            auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
            if (ec != std::errc() || end != v->data() + v->size() || !std::isfinite(x)) {
                fail(path, "expected a finite number, got '" + *v + "'");
            }
            out = x;
        }
    }

    template <class Int>
    void integer(const std::string& path, Int& out) const {
        if (auto v = raw(path)) {
            Int x{};
            auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
            if (ec != std::errc() || end != v->data() + v->size()) {
                fail(path, "expected an integer, got '" + *v + "'");
            }
            out = x;
        }
    }

    template <class Fn>
    void check(const std::string& path, Fn&& fn) const {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    }

    const std::string& origin() const { return origin_; }

private:
    const pt::ptree& tree_;
    std::string origin_;
    std::map<std::string, int> lines_;
};

std::vector<nn::Index> parse_widths(const std::string& text) {
    std::vector<nn::Index> widths;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b == std::string::npos) throw std::invalid_argument("empty width in list");
        item = item.substr(b, e - b + 1);
        long long w = 0;
        auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), w);
        if (ec != std::errc() || end != item.data() + item.size() || w < 1) {
            throw std::invalid_argument("widths must be positive integers, got '" + item + "'");
        }
        widths.push_back(static_cast<nn::Index>(w));
    }
    if (widths.empty()) throw std::invalid_argument("need at least one hidden width");
    return widths;
}

std::string widths_text(const std::vector<nn::Index>& widths) {
    std::string s;
    for (std::size_t i = 0; i < widths.size(); ++i) s += (i ? "," : "") + std::to_string(widths[i]);
    return s;
}

}  // namespace

nn::MlpSpec RunConfig::network_spec() const {
    nn::MlpSpec spec = default_spec(regime, task, setup.grid.n_points);
    if (hidden) {
        spec.layer_widths = {spec.input_width()};
        spec.layer_widths.insert(spec.layer_widths.end(), hidden->begin(), hidden->end());
        spec.layer_widths.push_back(task.output_width());
    }
    return spec;
}

nn::TrainConfig RunConfig::train_config(bool paper_scale) const {
    nn::TrainConfig c;
    c.iterations = iterations ? *iterations : default_iterations(regime, task, paper_scale);
    c.adam = adam;
    c.seed = init_seed;
    c.loss = nn::loss_for(task.head());
    c.eval_every = eval_every;
    return c;
}

void RunConfig::validate() const {
    regime.validate();
    setup.grid.validate();
    setup.init.validate();
    setup.sizes.validate();
    check_task_compatible(regime, task);
    network_spec().validate();
    train_config().validate(network_spec());
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    const Reader r(tree, origin, key_lines(text));

    for (const auto& [section, body] : tree) {
        if (body.empty()) r.fail(section, "expected a [section] header before key = value lines");
        for (const auto& [key, value] : body) {
            if (!find_key(section, key)) r.fail(section + "." + key, "unknown key");
        }
    }

    RunConfig c;
    if (auto kind = r.raw("regime.kind")) {
        r.check("regime.kind", [&] {
            switch (regime_kind_from_string(*kind)) {
                case RegimeKind::SeparatedS: c.regime = SamplingRegime::separated_s(); break;
                case RegimeKind::AdjacentS: c.regime = SamplingRegime::adjacent_s(); break;
                case RegimeKind::VaryingAll: c.regime = SamplingRegime::varying_all(0.0); break;
            }
        });
    }
    r.number("regime.s_min", c.regime.sub_s.lo);
    r.number("regime.sub_s_max", c.regime.sub_s.hi);
    r.number("regime.super_s_min", c.regime.super_s.lo);
    r.number("regime.s_max", c.regime.super_s.hi);
    r.number("regime.eta", c.regime.eta);
    r.number("regime.omega_c", c.regime.omega_c);
    r.number("regime.delta", c.regime.delta);
    try {
        c.regime.validate();
    } catch (const std::invalid_argument& e) {
        // The message starts with the offending key, e.g. "regime.s_min must be >= 0.01".
        const std::string msg = e.what();
        const std::string key = msg.substr(0, msg.find(' '));
        r.fail(key.find('.') != std::string::npos ? key : "regime", msg);
    }

    TimeGrid& g = c.setup.grid;
    r.number("grid.t_min", g.t_min);
    r.number("grid.t_max", g.t_max);
    r.integer("grid.n_points", g.n_points);
    if (g.n_points < 2) r.fail("grid.n_points", "must be at least 2");
    if (g.t_min < 0.0) r.fail("grid.t_min", "must be >= 0");
    if (!(g.t_max > g.t_min)) r.fail("grid.t_max", "must exceed grid.t_min");

    const std::string temperature = r.raw("bath.temperature").value_or("zero");
    double beta = 1.0;
    r.number("bath.beta", beta);
    if (temperature == "finite") {
        r.check("bath.beta", [&] { c.setup.bath = BathSpec::finite_beta(beta); });
    } else if (temperature != "zero") {
        r.fail("bath.temperature", "expected zero or finite, got '" + temperature + "'");
    }

    QubitInit& q = c.setup.init;
    double re = q.rho01.real(), im = q.rho01.imag();
    r.number("init.rho00", q.rho00);
    r.number("init.rho01_re", re);
    r.number("init.rho01_im", im);
    r.number("init.omega0", q.omega0);
    q.rho01 = {re, im};
    r.check("init.rho01_re", [&] { q.validate(); });

    SplitSizes& sz = c.setup.sizes;
    r.integer("splits.n_train", sz.n_train);
    r.integer("splits.n_valid", sz.n_valid);
    r.integer("splits.n_test", sz.n_test);
    for (const auto& [key, n] : {std::pair{"splits.n_train", sz.n_train}, std::pair{"splits.n_valid", sz.n_valid},
                                 std::pair{"splits.n_test", sz.n_test}}) {
        if (n == 0 || n % 3 != 0) r.fail(key, "must be a positive multiple of 3");
    }

    r.number("quadrature.tol", c.setup.quadrature_tol);
    if (!(c.setup.quadrature_tol > 0.0 && c.setup.quadrature_tol <= 1e-4)) {
        r.fail("quadrature.tol", "must lie in (0, 1e-4]");
    }

    if (auto v = r.raw("task.kind")) r.check("task.kind", [&] { c.task.kind = task_kind_from_string(*v); });
    if (auto v = r.raw("task.targets")) {
        r.check("task.targets", [&] { c.task.targets = regression_targets_from_string(*v); });
    }
    r.check("task.targets", [&] { check_task_compatible(c.regime, c.task); });

    if (auto v = r.raw("network.hidden"); v && *v != "auto") {
        r.check("network.hidden", [&] { c.hidden = parse_widths(*v); });
    }
    if (auto v = r.raw("train.iterations"); v && *v != "auto") {
        std::int64_t it = 0;
        r.integer("train.iterations", it);
        if (it < 0) r.fail("train.iterations", "must be >= 0");
        c.iterations = it;
    }
    r.number("train.lr", c.adam.lr);
    r.number("train.beta1", c.adam.beta1);
    r.number("train.beta2", c.adam.beta2);
    r.number("train.epsilon", c.adam.epsilon);
    r.integer("train.eval_every", c.eval_every);
    if (!(c.adam.lr > 0.0)) r.fail("train.lr", "must be positive");
    if (!(c.adam.beta1 >= 0.0 && c.adam.beta1 < 1.0)) r.fail("train.beta1", "must lie in [0, 1)");
    if (!(c.adam.beta2 >= 0.0 && c.adam.beta2 < 1.0)) r.fail("train.beta2", "must lie in [0, 1)");
    if (!(c.adam.epsilon > 0.0)) r.fail("train.epsilon", "must be positive");
    if (c.eval_every < 1) r.fail("train.eval_every", "must be >= 1");

    r.integer("seeds.data", c.data_seed);
    r.integer("seeds.init", c.init_seed);
    c.output_dir = r.raw("output.dir").value_or("");
    r.integer("runtime.threads", c.setup.threads);
    if (c.setup.threads < 1) r.fail("runtime.threads", "must be >= 1");

    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.string());
}

std::string to_ini(const RunConfig& c) {
    std::ostringstream os;
    const SamplingRegime& g = c.regime;
    os << "[regime]\nkind = " << to_string(g.kind) << "\ns_min = " << format_double(g.sub_s.lo)
       << "\nsub_s_max = " << format_double(g.sub_s.hi) << "\nsuper_s_min = " << format_double(g.super_s.lo)
       << "\ns_max = " << format_double(g.super_s.hi) << "\neta = " << format_double(g.eta)
       << "\nomega_c = " << format_double(g.omega_c) << "\ndelta = " << format_double(g.delta) << "\n\n";
    os << "[grid]\nt_min = " << format_double(c.setup.grid.t_min) << "\nt_max = " << format_double(c.setup.grid.t_max)
       << "\nn_points = " << c.setup.grid.n_points << "\n\n";
    os << "[bath]\ntemperature = " << (c.setup.bath.is_zero_temperature() ? "zero" : "finite") << "\n";
    if (!c.setup.bath.is_zero_temperature()) os << "beta = " << format_double(c.setup.bath.beta()) << "\n";
    os << "\n[init]\nrho00 = " << format_double(c.setup.init.rho00)
       << "\nrho01_re = " << format_double(c.setup.init.rho01.real())
       << "\nrho01_im = " << format_double(c.setup.init.rho01.imag())
       << "\nomega0 = " << format_double(c.setup.init.omega0) << "\n\n";
    os << "[splits]\nn_train = " << c.setup.sizes.n_train << "\nn_valid = " << c.setup.sizes.n_valid
       << "\nn_test = " << c.setup.sizes.n_test << "\n\n";
    os << "[quadrature]\ntol = " << format_double(c.setup.quadrature_tol) << "\n\n";
    os << "[task]\nkind = " << to_string(c.task.kind) << "\ntargets = " << to_string(c.task.targets) << "\n\n";
    os << "[network]\nhidden = " << (c.hidden ? widths_text(*c.hidden) : "auto") << "\n\n";
    os << "[train]\niterations = " << (c.iterations ? std::to_string(*c.iterations) : "auto")
       << "\nlr = " << format_double(c.adam.lr) << "\nbeta1 = " << format_double(c.adam.beta1)
       << "\nbeta2 = " << format_double(c.adam.beta2) << "\nepsilon = " << format_double(c.adam.epsilon)
       << "\neval_every = " << c.eval_every << "\n\n";
    os << "[seeds]\ndata = " << c.data_seed << "\ninit = " << c.init_seed << "\n\n";
    os << "[output]\ndir = " << c.output_dir << "\n\n";
    os << "[runtime]\nthreads = " << c.setup.threads << "\n";
    return os.str();
}

std::string describe_config_keys() {
    std::ostringstream os;
    std::string section;
    for (const KeyInfo& k : kKeys) {
        if (section != k.section) {
            section = k.section;
            os << "  [" << section << "]\n";
        }
        std::string lhs = std::string("    ") + k.key + " = " + k.default_text;
        if (lhs.size() < 30) lhs.resize(30, ' ');
        os << lhs << "  " << k.help << "\n";
    }
    return os.str();
}

}  // namespace sdlearn
