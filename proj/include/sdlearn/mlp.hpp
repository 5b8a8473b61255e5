// Dense feed-forward network: sigmoid hidden layers, softmax or linear head.
// Batches are row-major in the sense of one sample per matrix row.
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace sdlearn::nn {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

enum class Head { Softmax, Linear };
enum class LossKind { CrossEntropy, Mse };

std::string_view to_string(Head h);
std::string_view to_string(LossKind l);
Head head_from_string(std::string_view s);
LossKind loss_from_string(std::string_view s);

// The loss paired with each head: softmax -> cross-entropy, linear -> MSE.
LossKind loss_for(Head h);

struct MlpSpec {
    std::vector<Index> layer_widths;  // input, hidden..., output
    Head head = Head::Softmax;

    void validate() const;
    Index input_width() const { return layer_widths.front(); }
    Index output_width() const { return layer_widths.back(); }
    std::size_t num_layers() const { return layer_widths.size() - 1; }

    friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

struct DenseLayer {
    Matrix weights;  // out x in
    RowVector bias;  // 1 x out
};

struct ModelParams {
    std::vector<DenseLayer> layers;

    bool same_shape(const ModelParams& other) const;
    bool all_finite() const;
};

struct ForwardCache {
    const Matrix* input = nullptr;   // not owned; must outlive the cache
    std::vector<Matrix> hidden;      // sigmoid outputs of each hidden layer
    Matrix output;                   // probabilities (softmax) or raw affine outputs
};

class ShapeMismatch : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Glorot-uniform weights, zero biases.
ModelParams init_params(const MlpSpec& spec, std::uint64_t seed);

ModelParams zeros_like(const ModelParams& params);

Matrix sigmoid(const Matrix& z);

// Row-wise softmax with max subtraction.
Matrix softmax(const Matrix& logits);

ForwardCache forward(const ModelParams& params, const MlpSpec& spec, const Matrix& batch);

Matrix predict(const ModelParams& params, const MlpSpec& spec, const Matrix& batch);

// -(1/M) sum_ij y_ij log(max(p_ij, 1e-12))
double loss_cross_entropy(const Matrix& pred, const Matrix& truth_onehot);

// Mean of squared differences over all M*D entries.
double loss_mse(const Matrix& pred, const Matrix& truth);

double loss(LossKind kind, const Matrix& pred, const Matrix& truth);

// Analytic gradients of loss_for(spec.head). The softmax/cross-entropy pair is
// fused to (p - y)/M at the head; MSE gives 2 (p - y) / (M D).
ModelParams backward(const ModelParams& params, const MlpSpec& spec, const ForwardCache& cache,
                     const Matrix& truth);

}  // namespace sdlearn::nn
