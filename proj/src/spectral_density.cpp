#include "sdlearn/spectral_density.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sdlearn {

OhmicityClass ohmicity_class(double s) {
    if (!(s > 0.0)) {
        throw std::invalid_argument("ohmicity_class: s must be positive, got " + std::to_string(s));
    }
    if (s < 1.0) return OhmicityClass::SubOhmic;
    if (s > 1.0) return OhmicityClass::SuperOhmic;
    return OhmicityClass::Ohmic;
}

std::string_view to_string(OhmicityClass c) {
    switch (c) {
        case OhmicityClass::SubOhmic: return "sub_ohmic";
        case OhmicityClass::Ohmic: return "ohmic";
        case OhmicityClass::SuperOhmic: return "super_ohmic";
    }
    return "unknown";
}

OhmicityClass ohmicity_class_from_id(int id) {
    if (id < 0 || id >= kNumClasses) {
        throw std::invalid_argument("invalid Ohmicity class id " + std::to_string(id));
    }
    return static_cast<OhmicityClass>(id);
}

SpectralParams::SpectralParams(double s_, double eta_, double omega_c_)
    : s(s_), eta(eta_), omega_c(omega_c_) {
    if (!(s > 0.0) || !(s <= kMaxOhmicity)) {
        throw std::invalid_argument("SpectralParams: s must lie in (0, 8], got " + std::to_string(s));
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("SpectralParams: eta must be positive, got " + std::to_string(eta));
    }
    if (!(omega_c > 0.0) || !std::isfinite(omega_c)) {
        throw std::invalid_argument("SpectralParams: omega_c must be positive, got " +
                                    std::to_string(omega_c));
    }
}

std::string describe(const SpectralParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "(s=" << p.s << ", eta=" << p.eta << ", omega_c=" << p.omega_c << ")";
    return os.str();
}

double spectral_density(double omega, const SpectralParams& p) {
    if (omega < 0.0) throw std::invalid_argument("spectral_density: omega must be >= 0");
    if (omega == 0.0) return 0.0;
    return p.eta * std::pow(p.omega_c, 1.0 - p.s) * std::pow(omega, p.s) * std::exp(-omega / p.omega_c);
}

BathSpec BathSpec::finite_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("BathSpec: beta must be positive and finite");
    }
    BathSpec b;
    b.beta_ = beta;
    return b;
}

double BathSpec::beta() const {
    if (!beta_) throw std::logic_error("BathSpec: zero-temperature bath has no finite beta");
    return *beta_;
}

double BathSpec::thermal_factor(double omega) const {
    if (!beta_) return 1.0;
    const double x = 0.5 * *beta_ * omega;
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

}  // namespace sdlearn
