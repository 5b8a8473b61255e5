// Independent reference computations used by the tests. None of these share
// code with the library routines they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "sdlearn/mlp.hpp"
#include "sdlearn/spectral_density.hpp"

namespace sdlearn::oracle {

// Ohmic zero-temperature decoherence function, obtained by integrating
// 4 eta e^{-w/wc} (1 - cos wt) / w in closed form.
inline double ohmic_gamma(double t, double eta, double omega_c) {
    return 2.0 * eta * std::log1p(omega_c * omega_c * t * t);
}

// Midpoint Riemann sum of the zero-temperature integrand on [0, 50 wc], taken
// in u with w = 50 wc u^2 so the w^s behaviour at the origin does not limit
// the accuracy for small s.
inline double riemann_gamma(double t, const SpectralParams& p, long nodes = 1000000) {
    const long double upper = 50.0L * p.omega_c;
    const long double h = 1.0L / nodes;
    long double sum = 0.0L;
    for (long i = 0; i < nodes; ++i) {
        const long double u = (i + 0.5L) * h;
        const long double w = upper * u * u;
        const long double dw = 2.0L * upper * u;
        const long double half = std::sin(w * t / 2.0L);
        const long double j = p.eta * std::pow(static_cast<long double>(p.omega_c), 1.0L - p.s) *
                              std::pow(w, static_cast<long double>(p.s)) * std::exp(-w / p.omega_c);
        sum += j * 2.0L * half * half / (w * w) * dw;
    }
    return static_cast<double>(4.0L * sum * h);
}

// X_k = sum_n x_n exp(-2 pi i k n / N), summed directly in long double.
inline std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double re = 0.0L, im = 0.0L;
        for (std::size_t m = 0; m < n; ++m) {
            const long double angle = -2.0L * std::numbers::pi_v<long double> *
                                      static_cast<long double>((k * m) % n) / static_cast<long double>(n);
            re += x[m] * std::cos(angle);
            im += x[m] * std::sin(angle);
        }
        out[k] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

// Central differences of `loss` with respect to every parameter; params is
// perturbed in place and restored. The divisor is the step actually taken in
// double precision.
inline nn::ModelParams finite_difference_grad(nn::ModelParams& params, const std::function<long double()>& loss,
                                              double h = 1e-5) {
    nn::ModelParams g = nn::zeros_like(params);
    auto probe = [&](double& v) {
        const double saved = v;
        const double hi = saved + h;
        const double lo = saved - h;
        v = hi;
        const long double up = loss();
        v = lo;
        const long double down = loss();
        v = saved;
        return static_cast<double>((up - down) / (static_cast<long double>(hi) - lo));
    };
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        auto& layer = params.layers[l];
        for (Eigen::Index i = 0; i < layer.weights.size(); ++i) g.layers[l].weights.data()[i] = probe(layer.weights.data()[i]);
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) g.layers[l].bias(i) = probe(layer.bias(i));
    }
    return g;
}

// Loss of a sigmoid MLP evaluated with plain loops in long double.
inline long double reference_loss(const nn::ModelParams& p, nn::Head head, const nn::Matrix& x, const nn::Matrix& y) {
    long double total = 0.0L;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        std::vector<long double> a(static_cast<std::size_t>(x.cols()));
        for (Eigen::Index c = 0; c < x.cols(); ++c) a[static_cast<std::size_t>(c)] = x(r, c);
        for (std::size_t l = 0; l < p.layers.size(); ++l) {
            const auto& layer = p.layers[l];
            std::vector<long double> z(static_cast<std::size_t>(layer.weights.rows()));
            for (Eigen::Index o = 0; o < layer.weights.rows(); ++o) {
                long double acc = layer.bias(o);
                for (Eigen::Index i = 0; i < layer.weights.cols(); ++i) acc += layer.weights(o, i) * a[static_cast<std::size_t>(i)];
                z[static_cast<std::size_t>(o)] = l + 1 < p.layers.size() ? 1.0L / (1.0L + std::exp(-acc)) : acc;
            }
            a = std::move(z);
        }
        if (head == nn::Head::Softmax) {
            long double top = a[0], norm = 0.0L;
            for (long double v : a) top = std::max(top, v);
            for (long double v : a) norm += std::exp(v - top);
            for (std::size_t c = 0; c < a.size(); ++c) {
                const long double prob = std::max(std::exp(a[c] - top) / norm, 1e-12L);
                total -= y(r, static_cast<Eigen::Index>(c)) * std::log(prob);
            }
        } else {
            for (std::size_t c = 0; c < a.size(); ++c) {
                const long double d = a[c] - y(r, static_cast<Eigen::Index>(c));
                total += d * d / static_cast<long double>(a.size());
            }
        }
    }
    return total / static_cast<long double>(x.rows());
}

// Largest |a - b| / max(|a|, |b|, floor) over all parameters.
inline double max_relative_difference(const nn::ModelParams& a, const nn::ModelParams& b, double floor = 1e-7) {
    double worst = 0.0;
    auto cmp = [&](double x, double y) {
        worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor}));
    };
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        for (Eigen::Index i = 0; i < a.layers[l].weights.size(); ++i) {
            cmp(a.layers[l].weights.data()[i], b.layers[l].weights.data()[i]);
        }
        for (Eigen::Index i = 0; i < a.layers[l].bias.size(); ++i) cmp(a.layers[l].bias(i), b.layers[l].bias(i));
    }
    return worst;
}

}  // namespace sdlearn::oracle
