#include "sdlearn/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>

#include "sdlearn/parallel.hpp"

namespace sdlearn {
namespace {

constexpr std::size_t kRowHeader = 4;  // s, eta, omega_c, class_id

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

double uniform_on(const Interval& range, double u) {
    return range.lo == range.hi ? range.lo : range.lo + (range.hi - range.lo) * u;
}

std::string csv_number(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, end);
}

Manifest manifest_tree(const DatasetManifest& m) {
    Manifest t;
    const SamplingRegime& r = m.regime;
    t.put("regime.kind", std::string(to_string(r.kind)));
    t.put("regime.delta", format_double(r.delta));
    t.put("regime.s_min", format_double(r.sub_s.lo));
    t.put("regime.sub_s_max", format_double(r.sub_s.hi));
    t.put("regime.super_s_min", format_double(r.super_s.lo));
    t.put("regime.s_max", format_double(r.super_s.hi));
    t.put("regime.eta", format_double(r.eta));
    t.put("regime.omega_c", format_double(r.omega_c));
    t.put("grid.t_min", format_double(m.grid.t_min));
    t.put("grid.t_max", format_double(m.grid.t_max));
    t.put("grid.n_points", m.grid.n_points);
    t.put("bath.temperature", m.bath.is_zero_temperature() ? "zero" : "finite");
    if (!m.bath.is_zero_temperature()) t.put("bath.beta", format_double(m.bath.beta()));
    t.put("init.rho00", format_double(m.init.rho00));
    t.put("init.rho01_re", format_double(m.init.rho01.real()));
    t.put("init.rho01_im", format_double(m.init.rho01.imag()));
    t.put("init.omega0", format_double(m.init.omega0));
    t.put("generation.master_seed", m.master_seed);
    t.put("generation.observable", std::string(to_string(Observable::SigmaX)));
    t.put("generation.quadrature_tol", format_double(m.quadrature_tol));
    t.put("generation.task", m.task);
    t.put("generation.seed_rule", "mix64(mix64(mix64(master) ^ split) ^ index)");
    t.put("splits.n_train", m.sizes.n_train);
    t.put("splits.n_valid", m.sizes.n_valid);
    t.put("splits.n_test", m.sizes.n_test);
    t.put("rows.layout", "s,eta,omega_c,class_id,values[n_points]");
    return t;
}

DatasetManifest parse_manifest(const Manifest& t) {
    DatasetManifest m;
    try {
        SamplingRegime& r = m.regime;
        r.kind = regime_kind_from_string(manifest_string(t, "regime.kind"));
        r.delta = manifest_double(t, "regime.delta");
        r.sub_s = {manifest_double(t, "regime.s_min"), manifest_double(t, "regime.sub_s_max")};
        r.super_s = {manifest_double(t, "regime.super_s_min"), manifest_double(t, "regime.s_max")};
        r.eta = manifest_double(t, "regime.eta");
        r.omega_c = manifest_double(t, "regime.omega_c");
        r.validate();
        m.grid = {manifest_double(t, "grid.t_min"), manifest_double(t, "grid.t_max"),
                  manifest_u64(t, "grid.n_points")};
        m.grid.validate();
        const std::string temperature = manifest_string(t, "bath.temperature");
        if (temperature == "zero") {
            m.bath = BathSpec::zero_temperature();
        } else if (temperature == "finite") {
            m.bath = BathSpec::finite_beta(manifest_double(t, "bath.beta"));
        } else {
            throw CorruptFile("unknown bath temperature '" + temperature + "'");
        }
        m.init.rho00 = manifest_double(t, "init.rho00");
        m.init.rho01 = {manifest_double(t, "init.rho01_re"), manifest_double(t, "init.rho01_im")};
        m.init.omega0 = manifest_double(t, "init.omega0");
        m.init.validate();
        m.master_seed = manifest_u64(t, "generation.master_seed");
        m.quadrature_tol = manifest_double(t, "generation.quadrature_tol");
        m.task = manifest_string(t, "generation.task");
        m.sizes = {manifest_u64(t, "splits.n_train"), manifest_u64(t, "splits.n_valid"),
                   manifest_u64(t, "splits.n_test")};
        m.sizes.validate();
    } catch (const std::invalid_argument& e) {
        throw CorruptFile(std::string("invalid dataset manifest: ") + e.what());
    }
    return m;
}

std::vector<double> payload_rows(const LabeledDataset& ds) {
    const std::size_t n = ds.manifest.grid.n_points;
    std::vector<double> rows;
    rows.reserve(ds.manifest.sizes.total() * (kRowHeader + n));
    for (const auto& split : ds.splits) {
        for (const LabeledExample& ex : split) {
            rows.push_back(ex.targets().s);
            rows.push_back(ex.targets().eta);
            rows.push_back(ex.targets().omega_c);
            rows.push_back(static_cast<double>(static_cast<int>(ex.class_label)));
            rows.insert(rows.end(), ex.trajectory.values.begin(), ex.trajectory.values.end());
        }
    }
    return rows;
}

}  // namespace

std::string_view to_string(RegimeKind k) {
    switch (k) {
        case RegimeKind::SeparatedS: return "separated_s";
        case RegimeKind::AdjacentS: return "adjacent_s";
        case RegimeKind::VaryingAll: return "varying_all";
    }
    return "unknown";
}

RegimeKind regime_kind_from_string(std::string_view name) {
    if (name == "separated_s") return RegimeKind::SeparatedS;
    if (name == "adjacent_s") return RegimeKind::AdjacentS;
    if (name == "varying_all") return RegimeKind::VaryingAll;
    throw std::invalid_argument("unknown regime '" + std::string(name) +
                                "' (expected separated_s, adjacent_s or varying_all)");
}

SamplingRegime SamplingRegime::separated_s() {
    SamplingRegime r;
    r.kind = RegimeKind::SeparatedS;
    r.sub_s = {kMinSampledOhmicity, 0.5};
    r.super_s = {1.5, 4.0};
    return r;
}

SamplingRegime SamplingRegime::adjacent_s() {
    SamplingRegime r;
    r.kind = RegimeKind::AdjacentS;
    return r;
}

SamplingRegime SamplingRegime::varying_all(double delta) {
    SamplingRegime r;
    r.kind = RegimeKind::VaryingAll;
    r.delta = delta;
    r.eta = 0.25;
    r.omega_c = 0.25;
    return r;
}

Interval SamplingRegime::eta_range() const {
    return fixed_coupling() ? Interval{eta, eta} : Interval{eta, eta + delta};
}

Interval SamplingRegime::omega_c_range() const {
    return fixed_coupling() ? Interval{omega_c, omega_c} : Interval{omega_c, omega_c + delta};
}

void SamplingRegime::validate() const {
    require(sub_s.lo >= kMinSampledOhmicity, "regime.s_min must be >= 0.01");
    require(sub_s.hi <= 1.0 && sub_s.lo <= sub_s.hi,
            "regime.sub_s_max must lie in [s_min, 1]");
    require(super_s.lo >= 1.0 && super_s.lo <= super_s.hi,
            "regime.super_s_min must lie in [1, s_max]");
    require(super_s.hi <= kMaxOhmicity, "regime.s_max must be <= 8");
    require(sub_s.lo < 1.0 && super_s.hi > 1.0, "regime: sub and super intervals must not be {1}");
    require(eta > 0.0 && std::isfinite(eta), "regime.eta must be positive");
    require(omega_c > 0.0 && std::isfinite(omega_c), "regime.omega_c must be positive");
    require(delta >= 0.0 && std::isfinite(delta), "regime.delta must be >= 0");
    require(kind == RegimeKind::VaryingAll || delta == 0.0,
            "regime.delta is only meaningful for varying_all");
}

std::vector<double> delta_sweep() {
    std::vector<double> out;
    for (int i = 0; i < 10; ++i) out.push_back(i / 5.0);
    return out;
}

void SplitSizes::validate() const {
    const std::array<std::pair<const char*, std::size_t>, 3> entries{
        {{"n_train", n_train}, {"n_valid", n_valid}, {"n_test", n_test}}};
    for (const auto& [name, n] : entries) {
        require(n > 0 && n % 3 == 0, std::string("splits.") + name + " must be a positive multiple of 3");
    }
}

std::string_view to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Valid: return "valid";
        case Split::Test: return "test";
    }
    return "unknown";
}

Split split_from_string(std::string_view name) {
    if (name == "train") return Split::Train;
    if (name == "valid") return Split::Valid;
    if (name == "test") return Split::Test;
    throw std::invalid_argument("unknown split '" + std::string(name) + "' (train, valid, test)");
}

SpectralParams sample_params(const SamplingRegime& regime, OhmicityClass cls, Rng& rng) {
    const double u_s = rng.uniform();
    const double u_eta = rng.uniform();
    const double u_wc = rng.uniform();
    double s = 1.0;
    if (cls != OhmicityClass::Ohmic) {
        const Interval& range = cls == OhmicityClass::SubOhmic ? regime.sub_s : regime.super_s;
        s = uniform_on(range, u_s);
        // Endpoints at s = 1 are open; rounding can land there.
        while (ohmicity_class(s) != cls) s = uniform_on(range, rng.uniform());
    }
    return SpectralParams(s, uniform_on(regime.eta_range(), u_eta),
                          uniform_on(regime.omega_c_range(), u_wc));
}

LabeledDataset build_dataset(const SamplingRegime& regime, const SplitSizes& sizes,
                             const TimeGrid& grid, const BathSpec& bath, const QubitInit& init,
                             std::uint64_t master_seed, unsigned threads, double tol) {
    regime.validate();
    sizes.validate();
    grid.validate();
    init.validate();

    LabeledDataset ds;
    ds.manifest.regime = regime;
    ds.manifest.grid = grid;
    ds.manifest.bath = bath;
    ds.manifest.init = init;
    ds.manifest.master_seed = master_seed;
    ds.manifest.sizes = sizes;
    ds.manifest.quadrature_tol = tol;

    const std::array<std::size_t, 3> counts{sizes.n_train, sizes.n_valid, sizes.n_test};
    struct Slot {
        std::size_t split;
        std::size_t index;
    };
    std::vector<Slot> slots;
    slots.reserve(sizes.total());
    for (std::size_t sp = 0; sp < 3; ++sp) {
        for (std::size_t i = 0; i < counts[sp]; ++i) slots.push_back({sp, i});
    }

    std::vector<std::optional<LabeledExample>> built(slots.size());
    parallel_for(slots.size(), threads, [&](std::size_t k) {
        const auto [sp, i] = slots[k];
        const std::uint64_t seed = derive_seed(master_seed, sp, i);
        Rng rng(seed);
        const auto cls = static_cast<OhmicityClass>(i % kNumClasses);
        const SpectralParams params = sample_params(regime, cls, rng);
        built[k] = LabeledExample{
            generate_trajectory(Observable::SigmaX, grid, init, params, bath, tol), cls, seed};
    });

    std::set<std::uint64_t> seeds;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (!seeds.insert(built[k]->example_seed).second) {
            throw std::logic_error("build_dataset: example seed collision; choose another master seed");
        }
        ds.splits[slots[k].split].push_back(std::move(*built[k]));
    }
    return ds;
}

std::uint64_t dataset_checksum(const LabeledDataset& ds) { return payload_checksum(payload_rows(ds)); }

std::uint64_t save_dataset(const LabeledDataset& ds, const std::filesystem::path& path) {
    return write_archive(path, "dataset", kDatasetFormatVersion, manifest_tree(ds.manifest),
                         payload_rows(ds));
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    const Archive archive = read_archive(path, "dataset", kDatasetFormatVersion);
    LabeledDataset ds;
    ds.manifest = parse_manifest(archive.manifest);
    const DatasetManifest& m = ds.manifest;

    const std::size_t width = kRowHeader + m.grid.n_points;
    if (archive.payload.size() != width * m.sizes.total()) {
        throw CorruptFile(path.string() + ": payload size does not match split sizes and grid");
    }
    const std::array<std::size_t, 3> counts{m.sizes.n_train, m.sizes.n_valid, m.sizes.n_test};
    const double* row = archive.payload.data();
    for (std::size_t sp = 0; sp < 3; ++sp) {
        ds.splits[sp].reserve(counts[sp]);
        for (std::size_t i = 0; i < counts[sp]; ++i, row += width) {
            const double class_id = row[3];
            if (class_id != 0.0 && class_id != 1.0 && class_id != 2.0) {
                throw CorruptFile(path.string() + ": invalid class id in row");
            }
            const auto cls = static_cast<OhmicityClass>(static_cast<int>(class_id));
            try {
                SpectralParams params(row[0], row[1], row[2]);
                if (params.ohmicity() != cls) {
                    throw CorruptFile(path.string() + ": class label disagrees with s");
                }
                Trajectory traj{m.grid, Observable::SigmaX,
                                std::vector<double>(row + kRowHeader, row + width), params, m.bath,
                                m.init};
                ds.splits[sp].push_back({std::move(traj), cls, derive_seed(m.master_seed, sp, i)});
            } catch (const std::invalid_argument& e) {
                throw CorruptFile(path.string() + ": " + e.what());
            }
        }
    }
    return ds;
}

void export_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << "split,index,example_seed,class,s,eta,omega_c";
    for (std::size_t n = 0; n < ds.manifest.grid.n_points; ++n) out << ",x" << n;
    out << "\n";
    for (std::size_t sp = 0; sp < 3; ++sp) {
        const auto& split = ds.splits[sp];
        for (std::size_t i = 0; i < split.size(); ++i) {
            const LabeledExample& ex = split[i];
            out << to_string(static_cast<Split>(sp)) << ',' << i << ',' << ex.example_seed << ','
                << to_string(ex.class_label) << ',' << csv_number(ex.targets().s) << ','
                << csv_number(ex.targets().eta) << ',' << csv_number(ex.targets().omega_c);
            for (double v : ex.trajectory.values) out << ',' << csv_number(v);
            out << "\n";
        }
    }
    if (!out.flush()) throw IoFailure("failed writing " + path.string());
}

}  // namespace sdlearn
