// Discrete Fourier features of sampled trajectories.
//
// Forward convention: X_k = sum_n x_n exp(-i 2 pi k n / N), unnormalised.
// Feature layout: [Re X_0 .. Re X_{N-1}, Im X_0 .. Im X_{N-1}].
#pragma once

#include <Eigen/Core>

#include <complex>
#include <span>
#include <vector>

#include "sdlearn/column_symmetry.hpp"
#include "sdlearn/dephasing.hpp"

namespace sdlearn {

struct DftCoefficients {
    std::vector<double> re;
    std::vector<double> im;

    std::size_t size() const { return re.size(); }
};

struct FeatureVector {
    std::vector<double> values;
};

// Real-input DFT. The upper half of the spectrum is filled by exact conjugation,
// so X_{N-k} == conj(X_k) holds bit for bit. Throws for N < 2.
DftCoefficients dft_forward(std::span<const double> samples);

std::vector<std::complex<double>> dft_inverse_complex(const DftCoefficients& coeffs);

// Real part of the inverse transform.
std::vector<double> dft_inverse(const DftCoefficients& coeffs);

FeatureVector featurize(std::span<const double> samples);
FeatureVector featurize(const Trajectory& trajectory);

DftCoefficients split_features(const FeatureVector& features);

// One feature row per sample vector; all must share the same length.
Eigen::MatrixXd feature_matrix(std::span<const std::span<const double>> samples);

// Redundancy of the block feature layout for real signals of length n.
ColumnSymmetry hermitian_feature_symmetry(std::size_t n);

}  // namespace sdlearn
