#include "sdlearn/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sdlearn/seeding.hpp"

namespace sdlearn::nn {

std::string_view to_string(Head h) { return h == Head::Softmax ? "softmax" : "linear"; }

std::string_view to_string(LossKind l) { return l == LossKind::CrossEntropy ? "cross_entropy" : "mse"; }

Head head_from_string(std::string_view s) {
    if (s == "softmax") return Head::Softmax;
    if (s == "linear") return Head::Linear;
    throw std::invalid_argument("unknown head '" + std::string(s) + "'");
}

LossKind loss_from_string(std::string_view s) {
    if (s == "cross_entropy") return LossKind::CrossEntropy;
    if (s == "mse") return LossKind::Mse;
    throw std::invalid_argument("unknown loss '" + std::string(s) + "'");
}

LossKind loss_for(Head h) { return h == Head::Softmax ? LossKind::CrossEntropy : LossKind::Mse; }

void MlpSpec::validate() const {
    if (layer_widths.size() < 3) {
        throw std::invalid_argument("MlpSpec: need input, at least one hidden layer and output");
    }
    for (Index w : layer_widths) {
        if (w < 1) throw std::invalid_argument("MlpSpec: layer widths must be >= 1");
    }
    if (head == Head::Softmax && output_width() < 2) {
        throw std::invalid_argument("MlpSpec: softmax head needs at least two classes");
    }
}

bool ModelParams::same_shape(const ModelParams& other) const {
    if (layers.size() != other.layers.size()) return false;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].weights.rows() != other.layers[l].weights.rows() ||
            layers[l].weights.cols() != other.layers[l].weights.cols() ||
            layers[l].bias.size() != other.layers[l].bias.size()) {
            return false;
        }
    }
    return true;
}

bool ModelParams::all_finite() const {
    for (const DenseLayer& layer : layers) {
        if (!layer.weights.allFinite() || !layer.bias.allFinite()) return false;
    }
    return true;
}

ModelParams init_params(const MlpSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    ModelParams params;
    for (std::size_t l = 0; l < spec.num_layers(); ++l) {
        const Index fan_in = spec.layer_widths[l];
        const Index fan_out = spec.layer_widths[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        DenseLayer layer{Matrix(fan_out, fan_in), RowVector::Zero(fan_out)};
        for (Index r = 0; r < fan_out; ++r) {
            for (Index c = 0; c < fan_in; ++c) layer.weights(r, c) = rng.uniform(-limit, limit);
        }
        params.layers.push_back(std::move(layer));
    }
    return params;
}

ModelParams zeros_like(const ModelParams& params) {
    ModelParams out;
    for (const DenseLayer& layer : params.layers) {
        out.layers.push_back({Matrix::Zero(layer.weights.rows(), layer.weights.cols()),
                              RowVector::Zero(layer.bias.size())});
    }
    return out;
}

Matrix sigmoid(const Matrix& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

Matrix softmax(const Matrix& logits) {
    Matrix out = logits.colwise() - logits.rowwise().maxCoeff();
    out = out.array().exp().matrix();
    out.array().colwise() /= out.rowwise().sum().array();
    return out;
}

namespace {

void check_layers(const ModelParams& params, const MlpSpec& spec) {
    if (params.layers.size() != spec.num_layers()) {
        throw ShapeMismatch("model has " + std::to_string(params.layers.size()) +
                            " layers, spec expects " + std::to_string(spec.num_layers()));
    }
    for (std::size_t l = 0; l < spec.num_layers(); ++l) {
        const DenseLayer& layer = params.layers[l];
        if (layer.weights.cols() != spec.layer_widths[l] ||
            layer.weights.rows() != spec.layer_widths[l + 1] ||
            layer.bias.size() != spec.layer_widths[l + 1]) {
            throw ShapeMismatch("layer " + std::to_string(l) + " shape disagrees with spec");
        }
    }
}

Matrix affine(const Matrix& in, const DenseLayer& layer) {
    Matrix z(in.rows(), layer.weights.rows());
    z.noalias() = in * layer.weights.transpose();
    z.rowwise() += layer.bias;
    return z;
}

}  // namespace

ForwardCache forward(const ModelParams& params, const MlpSpec& spec, const Matrix& batch) {
    check_layers(params, spec);
    if (batch.cols() != spec.input_width()) {
        throw ShapeMismatch("batch has " + std::to_string(batch.cols()) + " columns, network expects " +
                            std::to_string(spec.input_width()));
    }
    ForwardCache cache;
    cache.input = &batch;
    cache.hidden.reserve(spec.num_layers() - 1);
    const Matrix* current = &batch;
    for (std::size_t l = 0; l + 1 < spec.num_layers(); ++l) {
        Matrix a = affine(*current, params.layers[l]);
        a = (1.0 + (-a.array()).exp()).inverse().matrix();
        cache.hidden.push_back(std::move(a));
        current = &cache.hidden.back();
    }
    cache.output = affine(*current, params.layers.back());
    if (spec.head == Head::Softmax) cache.output = softmax(cache.output);
    return cache;
}

Matrix predict(const ModelParams& params, const MlpSpec& spec, const Matrix& batch) {
    return forward(params, spec, batch).output;
}

double loss_cross_entropy(const Matrix& pred, const Matrix& truth_onehot) {
    if (pred.rows() != truth_onehot.rows() || pred.cols() != truth_onehot.cols()) {
        throw ShapeMismatch("cross-entropy: prediction and truth shapes differ");
    }
    if (pred.rows() == 0) throw ShapeMismatch("cross-entropy: empty batch");
    const double total = (truth_onehot.array() * pred.array().max(1e-12).log()).sum();
    return -total / static_cast<double>(pred.rows());
}

double loss_mse(const Matrix& pred, const Matrix& truth) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
        throw ShapeMismatch("mse: prediction and truth shapes differ");
    }
    if (pred.size() == 0) throw ShapeMismatch("mse: empty batch");
    return (pred - truth).squaredNorm() / static_cast<double>(pred.size());
}

double loss(LossKind kind, const Matrix& pred, const Matrix& truth) {
    return kind == LossKind::CrossEntropy ? loss_cross_entropy(pred, truth) : loss_mse(pred, truth);
}

ModelParams backward(const ModelParams& params, const MlpSpec& spec, const ForwardCache& cache,
                     const Matrix& truth) {
    check_layers(params, spec);
    if (cache.input == nullptr || cache.hidden.size() + 1 != spec.num_layers() ||
        cache.output.rows() != cache.input->rows() || cache.output.cols() != spec.output_width()) {
        throw ShapeMismatch("backward: cache does not come from a matching forward pass");
    }
    if (truth.rows() != cache.output.rows() || truth.cols() != cache.output.cols()) {
        throw ShapeMismatch("backward: truth shape disagrees with network output");
    }
    const auto m = static_cast<double>(truth.rows());
    Matrix delta = cache.output - truth;
    delta *= spec.head == Head::Softmax ? 1.0 / m : 2.0 / (m * static_cast<double>(truth.cols()));

    ModelParams grads;
    grads.layers.resize(spec.num_layers());
    for (std::size_t l = spec.num_layers(); l-- > 0;) {
        const Matrix& in = l == 0 ? *cache.input : cache.hidden[l - 1];
        DenseLayer& g = grads.layers[l];
        g.weights.noalias() = delta.transpose() * in;
        g.bias = delta.colwise().sum();
        if (l > 0) {
            Matrix back(delta.rows(), in.cols());
            back.noalias() = delta * params.layers[l].weights;
            delta = (back.array() * in.array() * (1.0 - in.array())).matrix();
        }
    }
    return grads;
}

}  // namespace sdlearn::nn
