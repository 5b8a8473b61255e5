#include "sdlearn/dephasing.hpp"

#include <Eigen/Core>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace sdlearn {
namespace {

using GaussRule = boost::math::quadrature::gauss<double, 16>;

constexpr double kCutoffMultiple = 40.0;
constexpr int kGradingLevels = 40;
constexpr int kMaxRefinements = 6;
constexpr std::size_t kReseedInterval = 32;

// Quadrature nodes with the time-independent part of the integrand folded into the weights:
// Gamma(t) = sum_j g_j * 2 sin^2(w_j t / 2) + patch * t^2.
struct NodeSet {
    Eigen::ArrayXd omega;
    Eigen::ArrayXd g;
    double patch = 0.0;
};

double integrand_weight(double omega, const SpectralParams& p, const BathSpec& bath) {
    return 4.0 * spectral_density(omega, p) * bath.thermal_factor(omega) / (omega * omega);
}

// Integral of 4 J(w) th(w) (1 - cos wt) / w^2 over [0, eps], divided by t^2, from the
// leading small-w behaviour J ~ eta wc^(1-s) w^s, th ~ 2/(beta w) + beta w / 6.
double small_omega_patch(double eps, const SpectralParams& p, const BathSpec& bath) {
    const double prefactor = 2.0 * p.eta * std::pow(p.omega_c, 1.0 - p.s);
    if (bath.is_zero_temperature()) {
        return prefactor * std::pow(eps, p.s + 1.0) / (p.s + 1.0);
    }
    const double beta = bath.beta();
    return prefactor * (2.0 / beta * std::pow(eps, p.s) / p.s +
                        beta / 6.0 * std::pow(eps, p.s + 2.0) / (p.s + 2.0));
}

double base_panel_width(const SpectralParams& p, double t_ref) {
    double h = p.omega_c / 4.0;
    if (t_ref > 0.0) h = std::min(h, std::numbers::pi / (4.0 * t_ref));
    return h;
}

NodeSet build_nodes(const SpectralParams& p, const BathSpec& bath, double t_ref, int refinement) {
    const double omega_max = kCutoffMultiple * p.omega_c;
    const auto base_panels =
        static_cast<std::size_t>(std::ceil(omega_max / base_panel_width(p, t_ref)));
    const std::size_t panels = base_panels << refinement;
    const double h = omega_max / static_cast<double>(panels);

    const auto& abscissa = GaussRule::abscissa();
    const auto& weights = GaussRule::weights();
    const std::size_t per_panel = 2 * abscissa.size();
    const std::size_t count = per_panel * (panels - 1 + kGradingLevels);

    NodeSet nodes;
    nodes.omega.resize(static_cast<Eigen::Index>(count));
    nodes.g.resize(static_cast<Eigen::Index>(count));
    Eigen::Index k = 0;
    auto add_panel = [&](double a, double b) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            for (double sign : {-1.0, 1.0}) {
                const double w = mid + sign * half * abscissa[i];
                nodes.omega[k] = w;
                nodes.g[k] = half * weights[i] * integrand_weight(w, p, bath);
                ++k;
            }
        }
    };

    double upper = h;
    for (int level = 0; level < kGradingLevels; ++level) {
        add_panel(0.5 * upper, upper);
        upper *= 0.5;
    }
    nodes.patch = small_omega_patch(upper, p, bath);
    for (std::size_t panel = 1; panel < panels; ++panel) {
        add_panel(static_cast<double>(panel) * h, static_cast<double>(panel + 1) * h);
    }
    return nodes;
}

double evaluate(const NodeSet& nodes, double t) {
    if (t == 0.0) return 0.0;
    const Eigen::ArrayXd half_sin = (nodes.omega * (0.5 * t)).sin();
    return 2.0 * (nodes.g * half_sin.square()).sum() + nodes.patch * t * t;
}

struct Converged {
    NodeSet coarse;
    double value_at_ref;  // from the refined rule
};

// Refine until the rule sized for t_ref agrees with one doubling at t_ref.
Converged converge(const SpectralParams& p, const BathSpec& bath, double t_ref, double tol) {
    if (!(tol > 0.0) || tol > 1e-4) {
        throw std::invalid_argument("quadrature tolerance must lie in (0, 1e-4]");
    }
    NodeSet coarse = build_nodes(p, bath, t_ref, 0);
    double coarse_value = evaluate(coarse, t_ref);
    double rel_change = 0.0;
    for (int level = 1; level <= kMaxRefinements; ++level) {
        NodeSet fine = build_nodes(p, bath, t_ref, level);
        const double fine_value = evaluate(fine, t_ref);
        const double diff = std::abs(fine_value - coarse_value);
        if (!std::isfinite(fine_value)) break;
        if (diff <= tol * std::abs(fine_value)) return {std::move(coarse), fine_value};
        rel_change = diff / std::abs(fine_value);
        coarse = std::move(fine);
        coarse_value = fine_value;
    }
    throw QuadratureNotConverged(p, t_ref, rel_change);
}

}  // namespace

QuadratureNotConverged::QuadratureNotConverged(const SpectralParams& p, double t, double rel_change)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "decoherence quadrature did not converge for " << describe(p) << " at t=" << t
             << " (last relative change " << rel_change << ")";
          return os.str();
      }()),
      params_(p),
      time_(t) {}

void QubitInit::validate() const {
    if (!(rho00 >= 0.0 && rho00 <= 1.0)) {
        throw std::invalid_argument("QubitInit: rho00 must lie in [0, 1]");
    }
    if (!std::isfinite(rho01.real()) || !std::isfinite(rho01.imag())) {
        throw std::invalid_argument("QubitInit: rho01 must be finite");
    }
    if (std::norm(rho01) > rho00 * (1.0 - rho00) + 1e-12) {
        throw std::invalid_argument("QubitInit: |rho01|^2 exceeds rho00 (1 - rho00)");
    }
    if (!std::isfinite(omega0)) throw std::invalid_argument("QubitInit: omega0 must be finite");
}

void TimeGrid::validate() const {
    if (n_points < 2) throw std::invalid_argument("TimeGrid: need at least 2 points");
    if (!std::isfinite(t_min) || !std::isfinite(t_max) || t_min < 0.0 || !(t_max > t_min)) {
        throw std::invalid_argument("TimeGrid: require 0 <= t_min < t_max");
    }
}

double TimeGrid::time(std::size_t n) const {
    return t_min + static_cast<double>(n) * (t_max - t_min) / static_cast<double>(n_points - 1);
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(n_points);
    for (std::size_t n = 0; n < n_points; ++n) out[n] = time(n);
    return out;
}

std::string_view to_string(Observable o) {
    switch (o) {
        case Observable::SigmaX: return "sigma_x";
        case Observable::SigmaY: return "sigma_y";
        case Observable::SigmaZ: return "sigma_z";
    }
    return "unknown";
}

double decoherence_gamma(double t, const SpectralParams& params, const BathSpec& bath, double tol) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("decoherence_gamma: t must be finite and >= 0");
    }
    if (t == 0.0) return 0.0;
    return converge(params, bath, t, tol).value_at_ref;
}

std::vector<double> gamma_profile(const TimeGrid& grid, const SpectralParams& params,
                                  const BathSpec& bath, double tol) {
    grid.validate();
    const Converged rule = converge(params, bath, grid.t_max, tol);
    const NodeSet& nodes = rule.coarse;

    // sin/cos of w_j t_n / 2 advanced by rotation, reseeded from the exact angle periodically.
    const Eigen::ArrayXd half_step = nodes.omega * (0.5 * grid.step());
    const Eigen::ArrayXd rot_cos = half_step.cos();
    const Eigen::ArrayXd rot_sin = half_step.sin();
    Eigen::ArrayXd c(nodes.omega.size());
    Eigen::ArrayXd s(nodes.omega.size());
    Eigen::ArrayXd next_c(nodes.omega.size());

    std::vector<double> out(grid.n_points);
    for (std::size_t n = 0; n < grid.n_points; ++n) {
        const double t = grid.time(n);
        if (n % kReseedInterval == 0) {
            const Eigen::ArrayXd angle = nodes.omega * (0.5 * t);
            c = angle.cos();
            s = angle.sin();
        } else {
            next_c = c * rot_cos - s * rot_sin;
            s = s * rot_cos + c * rot_sin;
            c.swap(next_c);
        }
        out[n] = t == 0.0 ? 0.0 : 2.0 * (nodes.g * s.square()).sum() + nodes.patch * t * t;
    }
    return out;
}

double expect_sigma_from_gamma(Observable axis, double t, double gamma, const QubitInit& init) {
    if (axis == Observable::SigmaZ) return 2.0 * init.rho00 - 1.0;
    const std::complex<double> coherence =
        init.rho01 * std::polar(std::exp(-gamma), -init.omega0 * t);
    return axis == Observable::SigmaX ? 2.0 * coherence.real() : -2.0 * coherence.imag();
}

Eigen::Matrix2cd evolve_density(double t, const QubitInit& init, const SpectralParams& params,
                                const BathSpec& bath, double tol) {
    init.validate();
    const double gamma = decoherence_gamma(t, params, bath, tol);
    const std::complex<double> coherence =
        t == 0.0 ? init.rho01 : init.rho01 * std::polar(std::exp(-gamma), -init.omega0 * t);
    Eigen::Matrix2cd rho;
    rho << init.rho00, coherence, std::conj(coherence), 1.0 - init.rho00;
    return rho;
}

double expect_sigma(Observable axis, double t, const QubitInit& init, const SpectralParams& params,
                    const BathSpec& bath, double tol) {
    init.validate();
    if (axis == Observable::SigmaZ) return expect_sigma_from_gamma(axis, t, 0.0, init);
    return expect_sigma_from_gamma(axis, t, decoherence_gamma(t, params, bath, tol), init);
}

Trajectory generate_trajectory(Observable observable, const TimeGrid& grid, const QubitInit& init,
                               const SpectralParams& params, const BathSpec& bath, double tol) {
    grid.validate();
    init.validate();
    Trajectory traj{grid, observable, std::vector<double>(grid.n_points), params, bath, init};
    if (observable == Observable::SigmaZ) {
        std::fill(traj.values.begin(), traj.values.end(), 2.0 * init.rho00 - 1.0);
        return traj;
    }
    const std::vector<double> gamma = gamma_profile(grid, params, bath, tol);
    for (std::size_t n = 0; n < grid.n_points; ++n) {
        traj.values[n] = expect_sigma_from_gamma(observable, grid.time(n), gamma[n], init);
    }
    return traj;
}

}  // namespace sdlearn
