#include "sdlearn/checkpoint.hpp"

#include <boost/algorithm/string/join.hpp>
#include <boost/algorithm/string/split.hpp>

#include <charconv>

#include "sdlearn/archive.hpp"

namespace sdlearn {
namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    boost::algorithm::split(out, s, [](char c) { return c == ','; });
    return out;
}

}  // namespace

std::uint64_t save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    ckpt.spec.validate();
    Manifest m;
    std::vector<std::string> widths;
    for (nn::Index w : ckpt.spec.layer_widths) widths.push_back(std::to_string(w));
    m.put("model.layer_widths", boost::algorithm::join(widths, ","));
    m.put("model.hidden_activation", "sigmoid");
    m.put("model.head", std::string(nn::to_string(ckpt.spec.head)));
    m.put("training.loss", std::string(nn::to_string(ckpt.meta.loss)));
    m.put("training.seed", ckpt.meta.seed);
    m.put("training.iterations", ckpt.meta.iterations);
    m.put("task.kind", ckpt.meta.task);
    m.put("task.targets", boost::algorithm::join(ckpt.meta.targets, ","));
    m.put("task.n_points", ckpt.meta.n_points);

    std::vector<double> payload;
    for (const nn::DenseLayer& layer : ckpt.params.layers) {
        for (nn::Index r = 0; r < layer.weights.rows(); ++r) {
            for (nn::Index c = 0; c < layer.weights.cols(); ++c) payload.push_back(layer.weights(r, c));
        }
        payload.insert(payload.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
    }
    return write_archive(path, "model", kCheckpointFormatVersion, m, payload);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    const Archive archive = read_archive(path, "model", kCheckpointFormatVersion);
    const Manifest& m = archive.manifest;
    Checkpoint ckpt;
    try {
        for (const std::string& w : split_list(manifest_string(m, "model.layer_widths"))) {
            nn::Index v = 0;
            auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
            if (ec != std::errc{} || end != w.data() + w.size()) throw CorruptFile("bad layer width " + w);
            ckpt.spec.layer_widths.push_back(v);
        }
        ckpt.spec.head = nn::head_from_string(manifest_string(m, "model.head"));
        ckpt.spec.validate();
        ckpt.meta.loss = nn::loss_from_string(manifest_string(m, "training.loss"));
    } catch (const std::invalid_argument& e) {
        throw CorruptFile(path.string() + ": " + e.what());
    }
    ckpt.meta.seed = manifest_u64(m, "training.seed");
    ckpt.meta.iterations = static_cast<std::int64_t>(manifest_u64(m, "training.iterations"));
    ckpt.meta.task = manifest_string(m, "task.kind");
    ckpt.meta.targets = split_list(manifest_string(m, "task.targets"));
    ckpt.meta.n_points = manifest_u64(m, "task.n_points");

    std::size_t expected = 0;
    for (std::size_t l = 0; l + 1 < ckpt.spec.layer_widths.size(); ++l) {
        expected += static_cast<std::size_t>((ckpt.spec.layer_widths[l] + 1) * ckpt.spec.layer_widths[l + 1]);
    }
    if (archive.payload.size() != expected) {
        throw CorruptFile(path.string() + ": parameter count does not match the architecture");
    }
    const double* p = archive.payload.data();
    for (std::size_t l = 0; l + 1 < ckpt.spec.layer_widths.size(); ++l) {
        const nn::Index in = ckpt.spec.layer_widths[l];
        const nn::Index out = ckpt.spec.layer_widths[l + 1];
        nn::DenseLayer layer{nn::Matrix(out, in), nn::RowVector(out)};
        for (nn::Index r = 0; r < out; ++r) {
            for (nn::Index c = 0; c < in; ++c) layer.weights(r, c) = *p++;
        }
        for (nn::Index c = 0; c < out; ++c) layer.bias[c] = *p++;
        ckpt.params.layers.push_back(std::move(layer));
    }
    return ckpt;
}

}  // namespace sdlearn
