// Exact linear redundancy among input columns: some columns are copies (or
// negated copies) of others and some are identically zero. A dense first
// layer applied to such inputs only needs the distinct columns; weights are
// folded onto them for the forward pass and gradients are scattered back.
#pragma once

#include <Eigen/Core>

#include <vector>

namespace sdlearn {

struct ColumnSymmetry {
    struct Alias {
        Eigen::Index column;  // column in the full layout
        Eigen::Index source;  // index into `distinct`
        double sign;          // column == sign * distinct column
    };

    Eigen::Index full_width = 0;
    std::vector<Eigen::Index> distinct;
    std::vector<Alias> aliases;
    // Columns in neither list are identically zero.

    Eigen::Index compact_width() const { return static_cast<Eigen::Index>(distinct.size()); }

    void validate() const;

    // True iff every row of `inputs` satisfies the relations bit-exactly.
    bool holds_for(const Eigen::MatrixXd& inputs) const;

    Eigen::MatrixXd compact(const Eigen::MatrixXd& inputs) const;

    // weights: out x full_width -> out x compact_width.
    Eigen::MatrixXd fold_weights(const Eigen::MatrixXd& weights) const;

    // Gradient w.r.t. folded weights -> gradient w.r.t. full weights.
    Eigen::MatrixXd expand_gradient(const Eigen::MatrixXd& folded_grad) const;
};

}  // namespace sdlearn
