// Model checkpoints: manifest (architecture, seed, iterations, loss, task)
// plus float64 parameter blocks, layer by layer: weights row-major, then bias.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sdlearn/mlp.hpp"

namespace sdlearn {

inline constexpr int kCheckpointFormatVersion = 1;

struct ModelMeta {
    std::uint64_t seed = 0;
    std::int64_t iterations = 0;
    nn::LossKind loss = nn::LossKind::CrossEntropy;
    std::string task = "classification";   // or "regression"
    std::vector<std::string> targets;      // regression target names, in output order
    std::size_t n_points = 0;              // trajectory length the model consumes
};

struct Checkpoint {
    nn::MlpSpec spec;
    nn::ModelParams params;
    ModelMeta meta;
};

std::uint64_t save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sdlearn
