#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ftnm/threshold_engine.hpp"

using namespace ftnm;

namespace {

ThresholdParams params(int a_c, double eta, int base_locations = 1,
                       double epsilon_target = 1e-6) {
  ThresholdParams p;
  p.locations_per_rectangle = a_c;
  p.eta = eta;
  p.base_locations = base_locations;
  p.epsilon_target = epsilon_target;
  return p;
}

// Least-squares slope of y against equally weighted x.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("threshold_engine") {
  TEST_CASE("threshold formula against frozen high-precision values") {
    CHECK(threshold_value(2) == doctest::Approx(0.18393972058572116).epsilon(1e-14));
    CHECK(threshold_value(5) == doctest::Approx(0.018393972058572116).epsilon(1e-14));
    CHECK(threshold_value(10) == doctest::Approx(0.0040875493463493591).epsilon(1e-14));
    CHECK(threshold_value(24) == doctest::Approx(0.00066644826299174334).epsilon(1e-14));
    CHECK(threshold_value(100) == doctest::Approx(3.7159539512266901e-5).epsilon(1e-14));
    CHECK_THROWS_AS(threshold_value(1), std::invalid_argument);

    for (int a_c = 2; a_c < 50; ++a_c)
      CHECK(threshold_value(a_c + 1) < threshold_value(a_c));
  }

  TEST_CASE("one recursion step") {
    CHECK(recursion_step(0.0, 7) == 0.0);
    CHECK(recursion_step(1.0, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(recursion_step(0.01, 10) == doctest::Approx(0.0048728551753263604).epsilon(1e-13));
    CHECK_THROWS_AS(recursion_step(-0.1, 5), std::invalid_argument);

    // Monotone in x on [0, 1].
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double cur = recursion_step(i * 0.01, 6);
      CHECK(cur >= prev);
      prev = cur;
    }
  }

  TEST_CASE("base rules") {
    // Location-product base: one step of the recursion applied to 2*eta.
    CHECK(base_bad_norm(10, 1e-3, BaseRule::LocationProduct) ==
          doctest::Approx(0.00018290024084192288).epsilon(1e-13));
    CHECK(base_bad_norm(10, 1e-3, BaseRule::LocationProduct) ==
          doctest::Approx(recursion_step(2e-3, 10)).epsilon(1e-15));
    // Clustered base: 2 (A_C eta)^2.
    CHECK(cluster_base_bound(10, 1e-3) == doctest::Approx(2e-4).epsilon(1e-14));
    CHECK(base_bad_norm(10, 1e-3, BaseRule::Cluster) == doctest::Approx(2e-4).epsilon(1e-14));
    CHECK(cluster_base_bound(10, 0.0) == 0.0);
    // At these parameters the clustered base is the larger of the two.
    CHECK(base_bad_norm(10, 1e-3, BaseRule::Cluster) >
          base_bad_norm(10, 1e-3, BaseRule::LocationProduct));
  }

  TEST_CASE("recursion traces") {
    SUBCASE("noiseless limit sticks to zero") {
      const RecursionTrace t = iterate_recursion(params(10, 0.0), 8, BaseRule::LocationProduct);
      CHECK(t.levels.size() == 8);
      for (const RecursionLevel& lvl : t.levels) CHECK(lvl.x == 0.0);
      CHECK(t.converged);
      CHECK_FALSE(t.diverged);
    }
    SUBCASE("at the formula threshold the trace decreases") {
      const RecursionTrace t =
          iterate_recursion(params(10, threshold_value(10)), 10, BaseRule::LocationProduct);
      REQUIRE(t.levels.size() == 10);
      for (std::size_t i = 1; i < t.levels.size(); ++i)
        CHECK(t.levels[i].log_x < t.levels[i - 1].log_x);
      CHECK(t.converged);
      CHECK_FALSE(t.diverged);
    }
    SUBCASE("well above threshold the trace diverges quickly") {
      const RecursionTrace t = iterate_recursion(params(10, 0.2), 10, BaseRule::LocationProduct);
      CHECK(t.diverged);
      CHECK(t.levels.size() <= 10);
      CHECK(t.levels.back().x > 1.0);
    }
    SUBCASE("levels are numbered from one") {
      const RecursionTrace t = iterate_recursion(params(5, 1e-3), 3, BaseRule::Cluster);
      REQUIRE(t.levels.size() == 3);
      CHECK(t.levels[0].level == 1);
      CHECK(t.levels[0].x == doctest::Approx(cluster_base_bound(5, 1e-3)).epsilon(1e-15));
      CHECK(t.levels[2].level == 3);
    }
  }

  TEST_CASE("log-space iterates expose the doubly-exponential decay") {
    const RecursionTrace t =
        iterate_recursion(params(5, 0.9 * threshold_value(5)), 20, BaseRule::LocationProduct);
    REQUIRE(t.levels.size() == 20);
    std::vector<double> rs, zs;
    for (const RecursionLevel& lvl : t.levels) {
      REQUIRE(lvl.log_x < 0.0);
      rs.push_back(static_cast<double>(lvl.level));
      zs.push_back(std::log(-lvl.log_x));
    }
    const double slope = fit_slope(rs, zs);
    CHECK(slope > 0.9 * std::numbers::ln2);
    CHECK(slope < 1.1 * std::numbers::ln2);
  }

  TEST_CASE("empirical threshold sits at the analytic boundary of the map") {
    // The iteration diverges exactly when the base value exceeds the nonzero
    // fixed point of the recursion map, which ties the empirical threshold
    // to the fixed point through the base rule.
    for (int a_c : {5, 10}) {
      const double fp = nonzero_fixed_point(a_c);
      CHECK(recursion_step(fp, a_c) == doctest::Approx(fp).epsilon(1e-9));
      const double emp = empirical_threshold(a_c, BaseRule::LocationProduct, 1e-10);
      CHECK(emp == doctest::Approx(fp / 2.0).epsilon(1e-6));
      CHECK(emp >= threshold_value(a_c));
    }
    const double emp2 = empirical_threshold(2, BaseRule::Cluster, 1e-10);
    CHECK(emp2 == doctest::Approx(std::sqrt(0.125)).epsilon(1e-7));
    CHECK(emp2 >= threshold_value(2));
  }

  TEST_CASE("global bad-norm bound") {
    CHECK(global_bad_bound(7, 0.0) == 0.0);
    CHECK(global_bad_bound(1, 0.37) == doctest::Approx(0.37).epsilon(1e-15));
    // Independent evaluation through pow.
    CHECK(global_bad_bound(100, 1e-4) ==
          doctest::Approx(100.0 * 1e-4 * std::pow(1.0001, 99)).epsilon(1e-12));
    CHECK_THROWS_AS(global_bad_bound(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(global_bad_bound(2, -0.1), std::invalid_argument);
  }

  TEST_CASE("output distance bound") {
    CHECK(output_distance_bound(0.0) == 0.0);
    CHECK(output_distance_bound(0.02) == doctest::Approx(0.52).epsilon(1e-15));
    CHECK_THROWS_AS(output_distance_bound(0.5), std::domain_error);
    CHECK_THROWS_AS(output_distance_bound(-0.01), std::domain_error);

    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
      const double cur = output_distance_bound(i * 0.004999);
      CHECK(cur > prev);
      prev = cur;
    }
  }

  TEST_CASE("required level solver") {
    SUBCASE("regression anchor") {
      const LevelReport r =
          required_level(params(10, threshold_value(10) / 2.0, 1, 0.1),
                         BaseRule::LocationProduct);
      CHECK(r.level == 1);
      CHECK(r.total_locations == 10);
      CHECK(r.eps_prime == doctest::Approx(0.0021508197137293517).epsilon(1e-9));
    }
    SUBCASE("above threshold is rejected") {
      CHECK_THROWS_AS(
          required_level(params(10, 2.0 * threshold_value(10), 1, 0.1),
                         BaseRule::LocationProduct),
          std::domain_error);
    }
    SUBCASE("doubling the circuit size costs at most one level") {
      int prev_level = 0;
      for (int n = 1; n <= 1024; n *= 2) {
        const LevelReport r = required_level(params(10, threshold_value(10) / 2.0, n, 0.1),
                                             BaseRule::LocationProduct);
        if (n > 1) {
          CHECK(r.level >= prev_level);
          CHECK(r.level <= prev_level + 1);
        }
        prev_level = r.level;
      }
    }
  }
}
