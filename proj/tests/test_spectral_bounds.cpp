#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ftnm/random.hpp"
#include "ftnm/spectral_bounds.hpp"

using namespace ftnm;

namespace {

std::vector<std::pair<double, double>> sampled_ohmic(double alpha, double omega_c, int points,
                                                     double lo, double hi) {
  std::vector<std::pair<double, double>> table;
  for (int i = 0; i < points; ++i) {
    const double w = lo + (hi - lo) * i / (points - 1);
    table.emplace_back(w, alpha * w * std::exp(-w / omega_c));
  }
  return table;
}

}  // namespace

TEST_SUITE("spectral_bounds") {
  TEST_CASE("trigamma identities") {
    CHECK(std::abs(trigamma(1.0) - std::numbers::pi * std::numbers::pi / 6.0) <= 1e-12);
    for (double x = 0.1; x <= 100.0; x *= 1.7) {
      CHECK(std::abs(trigamma(x + 1.0) - (trigamma(x) - 1.0 / (x * x))) <= 1e-12);
    }
    // Monotone decreasing on the positive axis.
    CHECK(trigamma(0.5) > trigamma(1.0));
    CHECK(trigamma(10.0) > trigamma(20.0));
    CHECK_THROWS_AS(trigamma(0.0), std::domain_error);
    CHECK_THROWS_AS(trigamma(-2.0), std::domain_error);
  }

  TEST_CASE("adaptive quadrature baseline") {
    const double got = integrate([](double x) { return std::sin(x); }, 0.0,
                                 std::numbers::pi, 1e-12);
    CHECK(std::abs(got - 2.0) <= 1e-10);
    const double gauss =
        integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12);
    CHECK(std::abs(gauss - std::sqrt(std::numbers::pi)) <= 1e-10);
  }

  TEST_CASE("reorganization integral") {
    CHECK(reorg_integral(make_ohmic(0.0, 3.0)) == doctest::Approx(0.0));
    CHECK(reorg_integral(make_ohmic(0.1, 5.0)) == doctest::Approx(0.5).epsilon(1e-6));

    // Linearity in the coupling.
    const double base = reorg_integral(make_ohmic(0.2, 2.0));
    CHECK(reorg_integral(make_ohmic(0.6, 2.0)) == doctest::Approx(3.0 * base).epsilon(1e-9));

    // A dense tabulated sampling of the same curve agrees.
    const SpectralDensity tab =
        make_tabulated(sampled_ohmic(0.1, 5.0, 4000, 1e-4, 250.0));
    CHECK(reorg_integral(tab) == doctest::Approx(0.5).epsilon(1e-3));

    // omega = 0 with a nonzero value makes the integrand singular.
    CHECK_THROWS_AS(reorg_integral(make_tabulated({{0.0, 1.0}, {1.0, 0.5}})),
                    std::domain_error);
    // omega = 0 with J(0) = 0 is fine (finite limit).
    CHECK_NOTHROW(reorg_integral(make_tabulated({{0.0, 0.0}, {1.0, 0.5}, {2.0, 0.3}})));
  }

  TEST_CASE("spectral density validation") {
    CHECK_THROWS_AS(make_ohmic(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_ohmic(0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_tabulated({{1.0, 0.2}, {1.0, 0.3}}), std::invalid_argument);
    CHECK_THROWS_AS(make_tabulated({{1.0, 0.2}, {2.0, -0.3}}), std::invalid_argument);
    CHECK_THROWS_AS(make_tabulated({}), std::invalid_argument);
    CHECK_THROWS_AS(make_ohmic(0.1, 1.0, -2.0), std::invalid_argument);
  }

  TEST_CASE("bath-energy bound") {
    const SpectralDensity j = make_ohmic(0.1, 5.0);
    CHECK(energy_bound(j, 0.0) == doctest::Approx(0.0));
    CHECK(energy_bound(j, 2.0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(energy_bound(j, 8.0) - 2.0 * energy_bound(j, 2.0)) <= 1e-12);
    CHECK_THROWS_AS(energy_bound(j, -1.0), std::invalid_argument);
  }

  TEST_CASE("cooling bound methods agree where they should") {
    SUBCASE("frozen cross-method values at alpha 0.3, omega_c 1") {
      const CoolingBound closed10 = cooling_bound(make_ohmic(0.3, 1.0, 10.0), CoolingMethod::Closed);
      CHECK(closed10.value == doctest::Approx(0.39281025629733534).epsilon(1e-10));
      CHECK_FALSE(closed10.outside_expansion_regime);
      const CoolingBound series10 = cooling_bound(make_ohmic(0.3, 1.0, 10.0), CoolingMethod::Series);
      CHECK(series10.value == doctest::Approx(0.39361758370345281).epsilon(1e-10));

      const CoolingBound closed100 =
          cooling_bound(make_ohmic(0.3, 1.0, 100.0), CoolingMethod::Closed);
      CHECK(closed100.value == doctest::Approx(0.38736111886177915).epsilon(1e-10));
      const CoolingBound series100 =
          cooling_bound(make_ohmic(0.3, 1.0, 100.0), CoolingMethod::Series);
      CHECK(series100.value == doctest::Approx(0.38736203740429372).epsilon(1e-10));
    }
    SUBCASE("quadrature tracks the closed form") {
      for (double beta : {10.0, 100.0, 1000.0}) {
        const SpectralDensity j = make_ohmic(0.3, 1.0, beta);
        const double q = cooling_bound(j, CoolingMethod::Quadrature).value;
        const double c = cooling_bound(j, CoolingMethod::Closed).value;
        CHECK(std::abs(q - c) / c <= 1e-4);
      }
    }
    SUBCASE("series is a good approximation deep in the expansion regime") {
      for (double beta : {100.0, 1000.0, 1e4}) {
        const SpectralDensity j = make_ohmic(0.3, 1.0, beta);
        const double s = cooling_bound(j, CoolingMethod::Series).value;
        const double c = cooling_bound(j, CoolingMethod::Closed).value;
        CHECK(std::abs(s - c) / c <= 0.01);
      }
    }
    SUBCASE("zero-temperature limit") {
      const SpectralDensity j = make_ohmic(0.5, 2.0, 5e7);
      for (CoolingMethod m :
           {CoolingMethod::Quadrature, CoolingMethod::Closed, CoolingMethod::Series}) {
        CHECK(cooling_bound(j, m).value == doctest::Approx(1.0).epsilon(1e-4));
      }
    }
    SUBCASE("monotone decreasing in beta; zero-point floor") {
      double prev = 1e300;
      for (double beta : {2.0, 5.0, 20.0, 80.0}) {
        const double q =
            cooling_bound(make_ohmic(0.4, 1.5, beta), CoolingMethod::Quadrature).value;
        CHECK(q < prev);
        prev = q;
        const double s = cooling_bound(make_ohmic(0.4, 1.5, beta), CoolingMethod::Series).value;
        CHECK(s >= std::sqrt(0.4 / 2.0) * 1.5 - 1e-12);
      }
    }
    SUBCASE("expansion-regime flag outside beta*omega_c > 1") {
      const SpectralDensity cold = make_ohmic(0.3, 1.0, 0.5);
      CHECK(cooling_bound(cold, CoolingMethod::Closed).outside_expansion_regime);
      CHECK(cooling_bound(cold, CoolingMethod::Series).outside_expansion_regime);
      CHECK_FALSE(cooling_bound(cold, CoolingMethod::Quadrature).outside_expansion_regime);
    }
    SUBCASE("tabulated densities support quadrature only") {
      const SpectralDensity tab =
          make_tabulated(sampled_ohmic(0.3, 1.0, 2000, 0.0, 60.0), 10.0);
      const double q = cooling_bound(tab, CoolingMethod::Quadrature).value;
      CHECK(q == doctest::Approx(0.39281025629733534).epsilon(1e-3));
      CHECK_THROWS_AS(cooling_bound(tab, CoolingMethod::Closed), std::invalid_argument);
    }
    SUBCASE("missing effective temperature is rejected") {
      CHECK_THROWS_AS(cooling_bound(make_ohmic(0.3, 1.0), CoolingMethod::Quadrature),
                      std::invalid_argument);
    }
  }

  TEST_CASE("hyperfine site operator and bound") {
    const Matrix site = single_site_spin_coupling();
    CHECK(site.rows() == 4);
    CHECK(is_hermitian(site));
    CHECK(std::abs(op_norm(site) - 1.5) <= 1e-12);
    // Spectrum {1/2, 1/2, 1/2, -3/2}: trace 0, trace of square 3.
    CHECK(std::abs(site.trace().real()) <= 1e-12);
    CHECK(std::abs((site * site).trace().real() - 3.0) <= 1e-12);

    CHECK(hyperfine_bound(make_hyperfine_model(1.0, 1.0, {0.0, 0.0})) == doctest::Approx(0.0));
    CHECK(hyperfine_bound(make_hyperfine_model(1.0, 1.0, {1.0})) ==
          doctest::Approx(1.5).epsilon(1e-14));
    CHECK(hyperfine_bound(make_hyperfine_model(1.0, 1.0, {0.5, 0.5})) ==
          doctest::Approx(1.5).epsilon(1e-14));

    CHECK_THROWS_AS(make_hyperfine_model(1.0, 1.0, {0.7, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(make_hyperfine_model(1.0, 1.0, {-0.1, 0.5}), std::invalid_argument);

    Rng rng(401);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> w(1 + static_cast<int>(rng.integer(6)));
      double total = 0.0;
      for (double& x : w) {
        x = rng.uniform();
        total += x;
      }
      const double scale = rng.uniform() / std::max(total, 1e-12);
      for (double& x : w) x *= scale;
      const HyperfineModel m = make_hyperfine_model(0.7, 2.0, w);
      CHECK(hyperfine_bound(m) <= 1.5 * 0.7 * 2.0 + 1e-12);
    }
  }
}
