#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sdlearn/spectral_density.hpp"

using namespace sdlearn;

TEST_CASE("spectral density at hand-evaluated points") {
    CHECK(spectral_density(1.0, SpectralParams(1.0, 0.1, 1.0)) == doctest::Approx(0.1 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(spectral_density(0.0, SpectralParams(0.3, 0.2, 0.7)) == 0.0);
    CHECK(spectral_density(0.0, SpectralParams(3.0, 0.2, 0.7)) == 0.0);
    CHECK_THROWS_AS(spectral_density(-1.0, SpectralParams(1.0, 0.1, 1.0)), std::invalid_argument);
}

TEST_CASE("spectral density peaks at s * omega_c") {
    for (double s : {0.5, 1.0, 2.5}) {
        const SpectralParams p(s, 0.25, 0.8);
        const double peak = s * p.omega_c;
        const double jp = spectral_density(peak, p);
        CHECK(jp > spectral_density(peak * 0.99, p));
        CHECK(jp > spectral_density(peak * 1.01, p));
    }
}

TEST_CASE("ohmicity classes split exactly at one") {
    CHECK(ohmicity_class(0.5) == OhmicityClass::SubOhmic);
    CHECK(ohmicity_class(1.0) == OhmicityClass::Ohmic);
    CHECK(ohmicity_class(1.5) == OhmicityClass::SuperOhmic);
    CHECK(ohmicity_class(std::nextafter(1.0, 0.0)) == OhmicityClass::SubOhmic);
    CHECK(ohmicity_class(std::nextafter(1.0, 2.0)) == OhmicityClass::SuperOhmic);
    CHECK_THROWS_AS(ohmicity_class(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ohmicity_class(-0.2), std::invalid_argument);
}

TEST_CASE("spectral parameters reject non-positive values") {
    CHECK_THROWS_AS(SpectralParams(0.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralParams(1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralParams(1.0, 0.1, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralParams(8.5, 0.1, 1.0), std::invalid_argument);
    CHECK_NOTHROW(SpectralParams(8.0, 0.1, 1.0));
}

TEST_CASE("thermal factor") {
    const BathSpec zero = BathSpec::zero_temperature();
    CHECK(zero.thermal_factor(0.3) == 1.0);
    const BathSpec hot = BathSpec::finite_beta(2.0);
    CHECK(hot.thermal_factor(0.5) == doctest::Approx(1.0 / std::tanh(0.5)).epsilon(1e-14));
    // Series branch: coth x ~ 1/x + x/3.
    const double x = 1e-6;
    CHECK(hot.thermal_factor(x) == doctest::Approx(1.0 / x + x / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(BathSpec::finite_beta(0.0), std::invalid_argument);
}
