#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ledspdc/errors.hpp"
#include "ledspdc/pump.hpp"

using namespace ledspdc;

TEST_SUITE("pump") {
  TEST_CASE("default geometry matches the independent evaluation") {
    // Frozen from a 40-digit evaluation of the two closed forms.
    const PropagatedPump p = propagate(PumpBeam{}, 0.1);
    CHECK(p.sigma_z == doctest::Approx(5.8597991771950678e-4).epsilon(1e-13));
    CHECK(p.delta == doctest::Approx(1.0999515499856745e-5).epsilon(1e-13));
    CHECK(p.b_param == doctest::Approx(9.3855737775658075e-3).epsilon(1e-13));
    CHECK(p.z == 0.1);
  }

  TEST_CASE("narrow setup beam") {
    PumpBeam pump;
    pump.sigma_0 = 0.8e-3;
    const PropagatedPump p = propagate(pump, 0.1);
    CHECK(p.sigma_z == doctest::Approx(5.8599341138349046e-4).epsilon(1e-13));
    CHECK(p.b_param == doctest::Approx(9.3853576750966083e-3).epsilon(1e-13));
  }

  TEST_CASE("k_p times wavelength is 2 pi") {
    for (double lambda : {405e-9, 810e-9, 1e-6}) {
      PumpBeam pump;
      pump.wavelength = lambda;
      CHECK(std::abs(pump.k_p() * lambda / (2.0 * std::numbers::pi) - 1.0) < 1e-12);
    }
  }

  TEST_CASE("incoherent limit: delta tends to ell_c") {
    PumpBeam pump;
    pump.ell_c = 1e-6;
    const PropagatedPump p = propagate(pump, 1.0);
    REQUIRE(p.sigma_z / pump.ell_c > 1e3);
    CHECK(std::abs(p.delta / pump.ell_c - 1.0) < 1e-6);
  }

  TEST_CASE("coherent limit: delta tends to 2 sigma_z and B to 1") {
    PumpBeam pump;
    pump.ell_c = 10.0;
    const PropagatedPump p = propagate(pump, 1e-3);
    REQUIRE(p.sigma_z / pump.ell_c < 1e-3);
    CHECK(std::abs(p.delta / (2.0 * p.sigma_z) - 1.0) < 1e-6);
    CHECK(p.b_param == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("sigma_z is linear in z") {
    const PumpBeam pump;
    for (double z : {1e-3, 0.05, 0.1, 2.0}) {
      CHECK(std::abs(beam_size_at(pump, 2.0 * z) / (2.0 * beam_size_at(pump, z)) - 1.0) < 1e-12);
    }
  }

  TEST_CASE("B in (0, 1] and derived bounds over log-uniform parameters") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> expo(-7.0, -1.0);
    for (int trial = 0; trial < 2000; ++trial) {
      PumpBeam pump;
      pump.sigma_0 = std::pow(10.0, expo(gen));
      pump.ell_c = std::pow(10.0, expo(gen));
      pump.wavelength = std::pow(10.0, expo(gen));
      const double z = std::pow(10.0, expo(gen));
      const PropagatedPump p = propagate(pump, z);
      CHECK(p.sigma_z > 0.0);
      CHECK(p.b_param > 0.0);
      CHECK(p.b_param <= 1.0);
      CHECK(p.delta <= std::min(pump.ell_c, 2.0 * p.sigma_z) * (1.0 + 1e-12));
    }
  }

  TEST_CASE("delta increases and B decreases with sigma_z") {
    const double ell_c = 11e-6;
    double last_delta = 0.0;
    double last_b = 2.0;
    for (double sz = 1e-7; sz < 1e-1; sz *= 1.5) {
      const double d = effective_width(ell_c, sz);
      CHECK(d > last_delta);
      CHECK(d / (2.0 * sz) < last_b);
      last_delta = d;
      last_b = d / (2.0 * sz);
    }
  }

  TEST_CASE("invalid inputs name the field") {
    PumpBeam pump;
    CHECK_THROWS_WITH_AS(propagate(pump, 0.0), doctest::Contains("z"), DomainError);
    CHECK_THROWS_WITH_AS(propagate(pump, -1.0), doctest::Contains("z"), DomainError);
    pump.sigma_0 = 0.0;
    CHECK_THROWS_WITH_AS(propagate(pump, 0.1), doctest::Contains("sigma0"), DomainError);
    pump = PumpBeam{};
    pump.ell_c = -1.0;
    CHECK_THROWS_WITH_AS(propagate(pump, 0.1), doctest::Contains("ell_c"), DomainError);
    pump = PumpBeam{};
    pump.wavelength = 0.0;
    CHECK_THROWS_WITH_AS(propagate(pump, 0.1), doctest::Contains("wavelength"), DomainError);
    pump = PumpBeam{};
    pump.A_p = 0.0;
    CHECK_THROWS_WITH_AS(propagate(pump, 0.1), doctest::Contains("A_p"), DomainError);
    pump = PumpBeam{};
    pump.A_norm = -1.0;
    CHECK_THROWS_WITH_AS(propagate(pump, 0.1), doctest::Contains("A_norm"), DomainError);
  }
}
