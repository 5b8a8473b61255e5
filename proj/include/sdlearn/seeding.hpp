// Seed derivation and the random stream used for parameter sampling and
// weight initialisation. Everything here is bit-reproducible across
// platforms: mt19937_64 is fully specified and doubles are built from the
// top 53 bits of each draw.
#pragma once

#include <cstdint>
#include <random>

namespace sdlearn {

// SplitMix64 finaliser applied to x + 0x9E3779B97F4A7C15.
std::uint64_t mix64(std::uint64_t x);

// mix64(mix64(mix64(master) ^ stream) ^ index)
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace sdlearn
