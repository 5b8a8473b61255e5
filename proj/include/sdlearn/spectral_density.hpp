// Power-law spectral densities J(w) = eta * wc^(1-s) * w^s * exp(-w/wc) and
// the bath temperature description used by the dephasing solver.
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sdlearn {

enum class OhmicityClass { SubOhmic = 0, Ohmic = 1, SuperOhmic = 2 };

inline constexpr int kNumClasses = 3;

// Largest Ohmicity exponent the quadrature is tuned for.
inline constexpr double kMaxOhmicity = 8.0;

OhmicityClass ohmicity_class(double s);

std::string_view to_string(OhmicityClass c);
OhmicityClass ohmicity_class_from_id(int id);

struct SpectralParams {
    double s;        // Ohmicity exponent
    double eta;      // coupling strength
    double omega_c;  // cut-off frequency, units of omega_0

    // Throws std::invalid_argument unless 0 < s <= kMaxOhmicity, eta > 0, omega_c > 0.
    SpectralParams(double s, double eta, double omega_c);

    OhmicityClass ohmicity() const { return ohmicity_class(s); }

    friend bool operator==(const SpectralParams&, const SpectralParams&) = default;
};

std::string describe(const SpectralParams& p);

// J(omega) for omega >= 0.
double spectral_density(double omega, const SpectralParams& p);

class BathSpec {
public:
    static BathSpec zero_temperature() { return BathSpec{}; }
    // beta is the inverse temperature in units of 1/omega_0.
    static BathSpec finite_beta(double beta);

    bool is_zero_temperature() const { return !beta_.has_value(); }
    double beta() const;

    // coth(beta*omega/2), or 1 at zero temperature.
    double thermal_factor(double omega) const;

    friend bool operator==(const BathSpec&, const BathSpec&) = default;

private:
    std::optional<double> beta_;
};

}  // namespace sdlearn
