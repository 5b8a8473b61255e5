#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "sdlearn/dephasing.hpp"
#include "sdlearn/seeding.hpp"

using namespace sdlearn;

namespace {
const SpectralParams kOhmic(1.0, 0.1, 1.0);
const BathSpec kZeroT = BathSpec::zero_temperature();
}  // namespace

TEST_CASE("gamma vanishes at t = 0") {
    CHECK(decoherence_gamma(0.0, kOhmic, kZeroT) == 0.0);
    CHECK(decoherence_gamma(0.0, SpectralParams(0.2, 0.3, 0.4), BathSpec::finite_beta(0.5)) == 0.0);
}

TEST_CASE("ohmic gamma matches the closed form") {
    CHECK(decoherence_gamma(10.0, kOhmic, kZeroT) == doctest::Approx(0.2 * std::log(101.0)).epsilon(1e-8));
    for (int i = 0; i < 50; ++i) {
        const double t = std::pow(10.0, -3.0 + 4.0 * i / 49.0);
        for (double wc : {0.25, 0.5, 2.0}) {
            const double exact = oracle::ohmic_gamma(t, 0.25, wc);
            const double got = decoherence_gamma(t, SpectralParams(1.0, 0.25, wc), kZeroT);
            CHECK(std::abs(got - exact) / exact <= 1e-8);
        }
    }
}

TEST_CASE("sub-Ohmic gamma matches a brute-force Riemann sum") {
    const SpectralParams p(0.5, 0.25, 0.5);
    const double ref = oracle::riemann_gamma(2.0, p);
    CHECK(std::abs(decoherence_gamma(2.0, p, kZeroT) - ref) / ref <= 1e-6);
}

TEST_CASE("profile agrees with pointwise evaluation") {
    const TimeGrid grid;
    for (const SpectralParams& p : {kOhmic, SpectralParams(0.05, 0.25, 0.5), SpectralParams(3.7, 1.1, 1.9)}) {
        for (const BathSpec& bath : {kZeroT, BathSpec::finite_beta(0.7)}) {
            const std::vector<double> prof = gamma_profile(grid, p, bath);
            REQUIRE(prof.size() == grid.n_points);
            CHECK(prof[0] == 0.0);
            for (std::size_t n = 1; n < grid.n_points; n += 7) {
                const double point = decoherence_gamma(grid.time(n), p, bath);
                CHECK(std::abs(prof[n] - point) <= 1e-10 * point);
            }
        }
    }
    const std::vector<double> ohmic = gamma_profile(grid, kOhmic, kZeroT);
    CHECK(std::abs(ohmic.back() - oracle::ohmic_gamma(10.0, 0.1, 1.0)) / ohmic.back() <= 1e-8);
}

TEST_CASE("gamma is linear in eta and vanishes with it") {
    Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        const double s = rng.uniform(0.05, 4.0), eta = rng.uniform(0.05, 1.0), wc = rng.uniform(0.25, 2.0);
        const double t = rng.uniform(0.1, 10.0);
        const double g1 = decoherence_gamma(t, SpectralParams(s, eta, wc), kZeroT);
        const double g2 = decoherence_gamma(t, SpectralParams(s, 2.0 * eta, wc), kZeroT);
        CHECK(std::abs(g2 - 2.0 * g1) <= 1e-10 * g2);
    }
    const double tiny = decoherence_gamma(5.0, SpectralParams(1.0, 1e-12, 1.0), kZeroT);
    CHECK(tiny == doctest::Approx(oracle::ohmic_gamma(5.0, 1e-12, 1.0)).epsilon(1e-8));
}

TEST_CASE("finite temperature dominates zero temperature") {
    Rng rng(12);
    for (int i = 0; i < 20; ++i) {
        const SpectralParams p(rng.uniform(0.05, 4.0), rng.uniform(0.05, 1.0), rng.uniform(0.25, 2.0));
        const double t = rng.uniform(0.01, 10.0);
        const double cold = decoherence_gamma(t, p, kZeroT);
        const double hot = decoherence_gamma(t, p, BathSpec::finite_beta(rng.uniform(0.1, 50.0)));
        CHECK(hot >= cold * (1.0 - 1e-8));
    }
}

TEST_CASE("evolved density matrix") {
    const QubitInit plus = QubitInit::plus_state();
    const Eigen::Matrix2cd rho0 = evolve_density(0.0, plus, kOhmic, kZeroT);
    CHECK(rho0(0, 0) == std::complex<double>(0.5, 0.0));
    CHECK(rho0(0, 1) == std::complex<double>(0.5, 0.0));
    CHECK(rho0(1, 0) == std::complex<double>(0.5, 0.0));
    CHECK(rho0(1, 1) == std::complex<double>(0.5, 0.0));

    const Eigen::Matrix2cd rho = evolve_density(10.0, plus, kOhmic, kZeroT);
    CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.5 * std::exp(-0.2 * std::log(101.0))).epsilon(1e-9));
    CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.19873).epsilon(1e-4));

    // No coupling: only the free phase rotates.
    const Eigen::Matrix2cd free = evolve_density(3.0, plus, SpectralParams(1.0, 1e-300, 1.0), kZeroT);
    CHECK(std::abs(free(0, 1)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("expectation values") {
    const QubitInit plus = QubitInit::plus_state();
    CHECK(expect_sigma(Observable::SigmaX, 0.0, plus, kOhmic, kZeroT) == 1.0);
    CHECK(expect_sigma(Observable::SigmaZ, 4.0, plus, kOhmic, kZeroT) == 0.0);
    const double x10 = expect_sigma(Observable::SigmaX, 10.0, plus, kOhmic, kZeroT);
    CHECK(x10 == doctest::Approx(std::exp(-0.2 * std::log(101.0)) * std::cos(10.0)).epsilon(1e-9));
    CHECK(x10 == doctest::Approx(-0.33350).epsilon(1e-4));
}

TEST_CASE("trajectories") {
    const TimeGrid grid;
    const QubitInit plus = QubitInit::plus_state();
    const Trajectory z = generate_trajectory(Observable::SigmaZ, grid, plus, kOhmic, kZeroT);
    for (double v : z.values) CHECK(v == 0.0);

    const Trajectory free = generate_trajectory(Observable::SigmaX, grid, plus, SpectralParams(1.0, 1e-300, 1.0), kZeroT);
    for (std::size_t n = 0; n < grid.n_points; ++n) CHECK(free.values[n] == doctest::Approx(std::cos(grid.time(n))).epsilon(1e-14));

    const Trajectory a = generate_trajectory(Observable::SigmaX, grid, plus, SpectralParams(0.7, 0.3, 0.5), kZeroT);
    const Trajectory b = generate_trajectory(Observable::SigmaX, grid, plus, SpectralParams(0.7, 0.3, 0.5), kZeroT);
    CHECK(a.values == b.values);
    for (double v : a.values) CHECK(std::abs(v) <= 1.0);

    // A super-Ohmic bath dephases less than a sub-Ohmic one by t = 10.
    const double g_super = gamma_profile(grid, SpectralParams(1.5, 0.1, 1.0), kZeroT).back();
    const double g_sub = gamma_profile(grid, SpectralParams(0.5, 0.1, 1.0), kZeroT).back();
    CHECK(g_super < g_sub);
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(decoherence_gamma(-1.0, kOhmic, kZeroT), std::invalid_argument);
    CHECK_THROWS_AS(decoherence_gamma(1.0, kOhmic, kZeroT, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(decoherence_gamma(1.0, kOhmic, kZeroT, 1e-3), std::invalid_argument);
    QubitInit bad;
    bad.rho01 = {0.6, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    TimeGrid g;
    g.n_points = 1;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
