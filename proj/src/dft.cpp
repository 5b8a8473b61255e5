#include "sdlearn/dft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdlearn {
namespace {

// cos/sin(2 pi m / N) for m = 0..N-1, with the reflection symmetries imposed exactly.
struct Twiddles {
    std::vector<double> cos;
    std::vector<double> sin;

    explicit Twiddles(std::size_t n) : cos(n), sin(n) {
        const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
        for (std::size_t m = 0; m <= n / 2; ++m) {
            cos[m] = std::cos(step * static_cast<double>(m));
            sin[m] = std::sin(step * static_cast<double>(m));
        }
        sin[0] = 0.0;
        if (n % 2 == 0) sin[n / 2] = 0.0;
        for (std::size_t m = n / 2 + 1; m < n; ++m) {
            cos[m] = cos[n - m];
            sin[m] = -sin[n - m];
        }
    }
};

}  // namespace

DftCoefficients dft_forward(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("dft_forward: need at least 2 samples");
    const Twiddles tw(n);
    DftCoefficients out{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t k = 0; k <= n / 2; ++k) {
        double re = 0.0;
        double im = 0.0;
        std::size_t idx = 0;
        for (std::size_t j = 0; j < n; ++j) {
            re += x[j] * tw.cos[idx];
            im -= x[j] * tw.sin[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        out.re[k] = re;
        out.im[k] = im;
    }
    out.im[0] = 0.0;
    if (n % 2 == 0) out.im[n / 2] = 0.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) {
        out.re[k] = out.re[n - k];
        out.im[k] = -out.im[n - k];
    }
    return out;
}

std::vector<std::complex<double>> dft_inverse_complex(const DftCoefficients& coeffs) {
    const std::size_t n = coeffs.size();
    if (n < 1 || coeffs.im.size() != n) {
        throw std::invalid_argument("dft_inverse: re/im must be non-empty and equally long");
    }
    const Twiddles tw(n);
    std::vector<std::complex<double>> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        double re = 0.0;
        double im = 0.0;
        std::size_t idx = 0;
        for (std::size_t k = 0; k < n; ++k) {
            re += coeffs.re[k] * tw.cos[idx] - coeffs.im[k] * tw.sin[idx];
            im += coeffs.re[k] * tw.sin[idx] + coeffs.im[k] * tw.cos[idx];
            idx += j;
            if (idx >= n) idx -= n;
        }
        out[j] = {re / static_cast<double>(n), im / static_cast<double>(n)};
    }
    return out;
}

std::vector<double> dft_inverse(const DftCoefficients& coeffs) {
    const auto full = dft_inverse_complex(coeffs);
    std::vector<double> out(full.size());
    for (std::size_t j = 0; j < full.size(); ++j) out[j] = full[j].real();
    return out;
}

FeatureVector featurize(std::span<const double> samples) {
    DftCoefficients c = dft_forward(samples);
    FeatureVector f;
    f.values.reserve(2 * c.size());
    f.values.insert(f.values.end(), c.re.begin(), c.re.end());
    f.values.insert(f.values.end(), c.im.begin(), c.im.end());
    return f;
}

FeatureVector featurize(const Trajectory& trajectory) { return featurize(trajectory.values); }

DftCoefficients split_features(const FeatureVector& features) {
    if (features.values.size() % 2 != 0) {
        throw std::invalid_argument("split_features: feature vector length must be even");
    }
    const auto half = static_cast<std::ptrdiff_t>(features.values.size() / 2);
    return {std::vector<double>(features.values.begin(), features.values.begin() + half),
            std::vector<double>(features.values.begin() + half, features.values.end())};
}

Eigen::MatrixXd feature_matrix(std::span<const std::span<const double>> samples) {
    if (samples.empty()) return {};
    const std::size_t n = samples.front().size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(2 * n));
    for (std::size_t row = 0; row < samples.size(); ++row) {
        if (samples[row].size() != n) {
            throw std::invalid_argument("feature_matrix: trajectories differ in length");
        }
        const FeatureVector f = featurize(samples[row]);
        out.row(static_cast<Eigen::Index>(row)) =
            Eigen::Map<const Eigen::RowVectorXd>(f.values.data(), static_cast<Eigen::Index>(2 * n));
    }
    return out;
}

ColumnSymmetry hermitian_feature_symmetry(std::size_t n) {
    if (n < 2) throw std::invalid_argument("hermitian_feature_symmetry: n must be >= 2");
    const auto N = static_cast<Eigen::Index>(n);
    ColumnSymmetry sym;
    sym.full_width = 2 * N;
    const Eigen::Index half = N / 2;
    // Real parts: Re X_0 .. Re X_{N/2} distinct, Re X_{N-k} = Re X_k.
    for (Eigen::Index k = 0; k <= half; ++k) sym.distinct.push_back(k);
    for (Eigen::Index k = half + 1; k < N; ++k) sym.aliases.push_back({k, N - k, 1.0});
    // Imaginary parts: Im X_0 (and Im X_{N/2} for even N) vanish, Im X_{N-k} = -Im X_k.
    const Eigen::Index last_distinct_im = (N % 2 == 0) ? half - 1 : half;
    const auto im_offset = static_cast<Eigen::Index>(sym.distinct.size()) - 1;
    for (Eigen::Index k = 1; k <= last_distinct_im; ++k) sym.distinct.push_back(N + k);
    for (Eigen::Index k = N - last_distinct_im; k < N; ++k) {
        sym.aliases.push_back({N + k, im_offset + (N - k), -1.0});
    }
    return sym;
}

}  // namespace sdlearn
