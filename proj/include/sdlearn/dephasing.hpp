// Exact pure-dephasing dynamics of a qubit coupled to a bosonic bath.
//
// The decoherence function
//     Gamma(t) = 4 * int_0^inf J(w) coth(beta w / 2) (1 - cos w t) / w^2 dw
// is evaluated with a composite 16-point Gauss-Legendre rule on [0, 40 wc].
// Panels near w = 0 are graded geometrically and the last sliver [0, eps]
// is integrated from the leading small-w power law, so the rule stays
// accurate for integrable singularities (finite beta, small s).
#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sdlearn/spectral_density.hpp"

namespace sdlearn {

inline constexpr double kDefaultQuadratureTol = 1e-8;

class QuadratureNotConverged : public std::runtime_error {
public:
    QuadratureNotConverged(const SpectralParams& p, double t, double rel_change);

    const SpectralParams& params() const { return params_; }
    double time() const { return time_; }

private:
    SpectralParams params_;
    double time_;
};

struct QubitInit {
    double rho00 = 0.5;
    std::complex<double> rho01{0.5, 0.0};
    double omega0 = 1.0;

    // |+><+|
    static QubitInit plus_state() { return {}; }

    // Throws std::invalid_argument if the initial state is not a density matrix.
    void validate() const;

    friend bool operator==(const QubitInit&, const QubitInit&) = default;
};

struct TimeGrid {
    double t_min = 0.0;
    double t_max = 10.0;
    std::size_t n_points = 400;

    void validate() const;
    double step() const { return (t_max - t_min) / static_cast<double>(n_points - 1); }
    double time(std::size_t n) const;
    std::vector<double> times() const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

enum class Observable { SigmaX, SigmaY, SigmaZ };

std::string_view to_string(Observable o);

struct Trajectory {
    TimeGrid grid;
    Observable observable = Observable::SigmaX;
    std::vector<double> values;
    SpectralParams params;
    BathSpec bath;
    QubitInit init;
};

double decoherence_gamma(double t, const SpectralParams& params, const BathSpec& bath,
                         double tol = kDefaultQuadratureTol);

// Gamma(t_n) on every grid point from one shared node set sized for the largest time.
std::vector<double> gamma_profile(const TimeGrid& grid, const SpectralParams& params,
                                  const BathSpec& bath, double tol = kDefaultQuadratureTol);

// Lab-frame density matrix in the (|0>, |1>) basis.
Eigen::Matrix2cd evolve_density(double t, const QubitInit& init, const SpectralParams& params,
                                const BathSpec& bath, double tol = kDefaultQuadratureTol);

// Expectation values given an already computed Gamma(t). <sx> = 2 Re rho01(t),
// <sy> = -2 Im rho01(t), <sz> = 2 rho00 - 1.
double expect_sigma_from_gamma(Observable axis, double t, double gamma, const QubitInit& init);

double expect_sigma(Observable axis, double t, const QubitInit& init, const SpectralParams& params,
                    const BathSpec& bath, double tol = kDefaultQuadratureTol);

Trajectory generate_trajectory(Observable observable, const TimeGrid& grid, const QubitInit& init,
                               const SpectralParams& params, const BathSpec& bath,
                               double tol = kDefaultQuadratureTol);

}  // namespace sdlearn
