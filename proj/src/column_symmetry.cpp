#include "sdlearn/column_symmetry.hpp"

#include <stdexcept>

namespace sdlearn {

void ColumnSymmetry::validate() const {
    std::vector<char> seen(static_cast<std::size_t>(full_width), 0);
    auto mark = [&](Eigen::Index c) {
        if (c < 0 || c >= full_width || seen[static_cast<std::size_t>(c)]) {
            throw std::invalid_argument("ColumnSymmetry: column out of range or listed twice");
        }
        seen[static_cast<std::size_t>(c)] = 1;
    };
    for (Eigen::Index c : distinct) mark(c);
    for (const Alias& a : aliases) {
        mark(a.column);
        if (a.source < 0 || a.source >= compact_width() || (a.sign != 1.0 && a.sign != -1.0)) {
            throw std::invalid_argument("ColumnSymmetry: malformed alias");
        }
    }
}

bool ColumnSymmetry::holds_for(const Eigen::MatrixXd& inputs) const {
    if (inputs.cols() != full_width) return false;
    std::vector<char> zero(static_cast<std::size_t>(full_width), 1);
    for (Eigen::Index c : distinct) zero[static_cast<std::size_t>(c)] = 0;
    for (const Alias& a : aliases) {
        zero[static_cast<std::size_t>(a.column)] = 0;
        if (!(inputs.col(a.column).array() == a.sign * inputs.col(distinct[a.source]).array()).all()) {
            return false;
        }
    }
    for (Eigen::Index c = 0; c < full_width; ++c) {
        if (zero[static_cast<std::size_t>(c)] && !(inputs.col(c).array() == 0.0).all()) return false;
    }
    return true;
}

Eigen::MatrixXd ColumnSymmetry::compact(const Eigen::MatrixXd& inputs) const {
    Eigen::MatrixXd out(inputs.rows(), compact_width());
    for (Eigen::Index j = 0; j < compact_width(); ++j) out.col(j) = inputs.col(distinct[j]);
    return out;
}

Eigen::MatrixXd ColumnSymmetry::fold_weights(const Eigen::MatrixXd& weights) const {
    Eigen::MatrixXd out(weights.rows(), compact_width());
    for (Eigen::Index j = 0; j < compact_width(); ++j) out.col(j) = weights.col(distinct[j]);
    for (const Alias& a : aliases) out.col(a.source) += a.sign * weights.col(a.column);
    return out;
}

Eigen::MatrixXd ColumnSymmetry::expand_gradient(const Eigen::MatrixXd& folded_grad) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(folded_grad.rows(), full_width);
    for (Eigen::Index j = 0; j < compact_width(); ++j) out.col(distinct[j]) = folded_grad.col(j);
    for (const Alias& a : aliases) out.col(a.column) = a.sign * folded_grad.col(a.source);
    return out;
}

}  // namespace sdlearn
