// Balanced, reproducible datasets of dephasing trajectories.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sdlearn/archive.hpp"
#include "sdlearn/dephasing.hpp"
#include "sdlearn/seeding.hpp"

namespace sdlearn {

inline constexpr int kDatasetFormatVersion = 1;

// Lowest sub-Ohmic exponent the sampler will draw.
inline constexpr double kMinSampledOhmicity = 0.01;

enum class RegimeKind { SeparatedS, AdjacentS, VaryingAll };

std::string_view to_string(RegimeKind k);
RegimeKind regime_kind_from_string(std::string_view name);

struct Interval {
    double lo;
    double hi;

    bool contains(double x) const { return x >= lo && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct SamplingRegime {
    RegimeKind kind = RegimeKind::AdjacentS;
    double delta = 0.0;            // VaryingAll interval length
    Interval sub_s{0.01, 1.0};
    Interval super_s{1.0, 4.0};
    double eta = 0.25;             // fixed value, or lower end when varying
    double omega_c = 0.5;

    static SamplingRegime separated_s();
    static SamplingRegime adjacent_s();
    static SamplingRegime varying_all(double delta);

    Interval eta_range() const;
    Interval omega_c_range() const;
    bool fixed_coupling() const { return kind != RegimeKind::VaryingAll; }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const SamplingRegime&, const SamplingRegime&) = default;
};

// The standard sweep values of delta: 0, 0.2, ..., 1.8.
std::vector<double> delta_sweep();

struct SplitSizes {
    std::size_t n_train = 4800;
    std::size_t n_valid = 2400;
    std::size_t n_test = 2400;

    void validate() const;
    std::size_t total() const { return n_train + n_valid + n_test; }
    friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

enum class Split { Train = 0, Valid = 1, Test = 2 };

std::string_view to_string(Split s);
Split split_from_string(std::string_view name);

struct LabeledExample {
    Trajectory trajectory;
    OhmicityClass class_label;
    std::uint64_t example_seed;

    const SpectralParams& targets() const { return trajectory.params; }
};

struct DatasetManifest {
    SamplingRegime regime;
    TimeGrid grid;
    BathSpec bath;
    QubitInit init;
    std::uint64_t master_seed = 0;
    SplitSizes sizes;
    double quadrature_tol = kDefaultQuadratureTol;
    std::string task = "any";  // free-form intent tag checked by the CLI
    int format_version = kDatasetFormatVersion;
};

struct LabeledDataset {
    DatasetManifest manifest;
    std::array<std::vector<LabeledExample>, 3> splits;

    const std::vector<LabeledExample>& split(Split s) const {
        return splits[static_cast<std::size_t>(s)];
    }
};

// s uniform on the class interval (exactly 1 for Ohmic), eta and omega_c fixed or
// uniform. Always consumes three draws (plus redraws when rounding lands s on 1).
SpectralParams sample_params(const SamplingRegime& regime, OhmicityClass cls, Rng& rng);

// Example i of every split has class i mod 3 and seed derive_seed(master, split, i).
// Generation uses up to `threads` workers; the result does not depend on it.
LabeledDataset build_dataset(const SamplingRegime& regime, const SplitSizes& sizes,
                             const TimeGrid& grid, const BathSpec& bath, const QubitInit& init,
                             std::uint64_t master_seed, unsigned threads = 1,
                             double tol = kDefaultQuadratureTol);

// Returns the payload checksum.
std::uint64_t save_dataset(const LabeledDataset& ds, const std::filesystem::path& path);
LabeledDataset load_dataset(const std::filesystem::path& path);

// Checksum of the payload save_dataset would write, without touching disk.
std::uint64_t dataset_checksum(const LabeledDataset& ds);

// One row per example: split,index,example_seed,class,s,eta,omega_c,x0..x{N-1}.
void export_csv(const LabeledDataset& ds, const std::filesystem::path& path);

}  // namespace sdlearn
