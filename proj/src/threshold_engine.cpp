#include "ftnm/threshold_engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ftnm {

namespace {

void require_a_c(int a_c) {
  if (a_c < 2) throw std::invalid_argument("locations per rectangle must be >= 2");
}

double binomial_choose_2(int a_c) { return 0.5 * a_c * (a_c - 1); }

void validate(const ThresholdParams& p) {
  require_a_c(p.locations_per_rectangle);
  if (p.eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  if (p.base_locations < 1) throw std::invalid_argument("base_locations must be >= 1");
  if (p.epsilon_target <= 0.0 || p.epsilon_target >= 1.0)
    throw std::invalid_argument("epsilon_target must lie in (0, 1)");
}

// log of recursion_step evaluated at log x, stable for arbitrarily small x.
double log_recursion_step(double log_x, int a_c) {
  const double x = std::exp(log_x);  // 0 after underflow; log1p(0) = 0 is exact there
  return std::log(binomial_choose_2(a_c)) + 2.0 * log_x + (a_c - 2) * std::log1p(x);
}

}  // namespace

double threshold_value(int a_c) {
  require_a_c(a_c);
  return 1.0 / (M_E * static_cast<double>(a_c) * static_cast<double>(a_c - 1));
}

double recursion_step(double x, int a_c) {
  require_a_c(a_c);
  if (x < 0.0) throw std::invalid_argument("recursion_step: x must be >= 0");
  return binomial_choose_2(a_c) * x * x * std::pow(1.0 + x, a_c - 2);
}

double cluster_base_bound(int a_c, double eta) {
  require_a_c(a_c);
  if (eta < 0.0) throw std::invalid_argument("cluster_base_bound: eta must be >= 0");
  const double amp = static_cast<double>(a_c) * eta;
  return 2.0 * amp * amp;
}

double base_bad_norm(int a_c, double eta, BaseRule rule) {
  require_a_c(a_c);
  if (eta < 0.0) throw std::invalid_argument("base_bad_norm: eta must be >= 0");
  switch (rule) {
    case BaseRule::LocationProduct: return recursion_step(2.0 * eta, a_c);
    case BaseRule::Cluster: return cluster_base_bound(a_c, eta);
  }
  throw std::invalid_argument("base_bad_norm: unknown base rule");
}

RecursionTrace iterate_recursion(const ThresholdParams& params, int r_max, BaseRule rule) {
  validate(params);
  if (r_max < 1) throw std::invalid_argument("iterate_recursion: r_max must be >= 1");

  RecursionTrace trace;
  const double x1 = base_bad_norm(params.locations_per_rectangle, params.eta, rule);

  if (x1 == 0.0) {
    for (int r = 1; r <= r_max; ++r)
      trace.levels.push_back({r, 0.0, -std::numeric_limits<double>::infinity()});
    trace.converged = true;
    return trace;
  }

  double log_x = std::log(x1);
  double prev_x = -1.0;
  for (int r = 1; r <= r_max; ++r) {
    if (r > 1) log_x = log_recursion_step(log_x, params.locations_per_rectangle);
    const double x = std::exp(log_x);
    trace.levels.push_back({r, x, log_x});
    if (x > 1.0) {
      trace.diverged = true;
      break;
    }
    if (x < 1e-300 || (prev_x >= 0.0 && x < prev_x && x < params.epsilon_target))
      trace.converged = true;
    prev_x = x;
  }
  return trace;
}

double empirical_threshold(int a_c, BaseRule rule, double tol) {
  require_a_c(a_c);
  if (tol <= 0.0) throw std::invalid_argument("empirical_threshold: tol must be positive");

  const auto diverges = [&](double eta) {
    ThresholdParams p;
    p.locations_per_rectangle = a_c;
    p.eta = eta;
    return iterate_recursion(p, 200, rule).diverged;
  };

  double lo = 0.0, hi = 1.0;
  if (!diverges(hi)) return hi;  // boundary beyond the search range
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (diverges(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double global_bad_bound(int base_locations, double rectangle_bad_norm) {
  if (base_locations < 1)
    throw std::invalid_argument("global_bad_bound: base_locations must be >= 1");
  if (rectangle_bad_norm < 0.0)
    throw std::invalid_argument("global_bad_bound: bad norm must be >= 0");
  return static_cast<double>(base_locations) * rectangle_bad_norm *
         std::exp((base_locations - 1) * std::log1p(rectangle_bad_norm));
}

double output_distance_bound(double eps) {
  if (eps < 0.0 || eps >= 0.5)
    throw std::domain_error("output_distance_bound: eps must lie in [0, 1/2)");
  return std::sqrt(2.0 * eps) + 16.0 * eps;
}

double nonzero_fixed_point(int a_c) {
  require_a_c(a_c);
  // recursion_step(x)/x = C(A_C,2) * x * (1+x)^(A_C-2) crosses 1 exactly once.
  double lo = 1e-12, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (recursion_step(mid, a_c) > mid ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

LevelReport required_level(const ThresholdParams& params, BaseRule rule) {
  validate(params);
  const double thr = threshold_value(params.locations_per_rectangle);
  if (params.eta >= thr)
    throw std::domain_error("required_level: eta is not below the threshold; no convergence");

  // Invert output_distance_bound by bisection (monotone on [0, 1/2)).
  double lo = 0.0, hi = 0.5 - 1e-12;
  if (output_distance_bound(hi) < params.epsilon_target)
    throw std::domain_error("required_level: epsilon_target beyond the bound's range");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (output_distance_bound(mid) > params.epsilon_target ? hi : lo) = mid;
  }
  const double eps_prime = 0.5 * (lo + hi);

  const int r_max = 60;
  const RecursionTrace trace = iterate_recursion(params, r_max, rule);
  if (trace.diverged)
    throw std::domain_error("required_level: recursion diverged below the stated threshold");

  for (const RecursionLevel& lvl : trace.levels) {
    if (global_bad_bound(params.base_locations, lvl.x) <= eps_prime) {
      LevelReport report;
      report.level = lvl.level;
      report.eps_prime = eps_prime;
      std::uint64_t total = params.base_locations;
      for (int i = 0; i < lvl.level; ++i) {
        if (total > (std::uint64_t{1} << 62) / params.locations_per_rectangle)
          throw std::overflow_error("required_level: location count overflows");
        total *= params.locations_per_rectangle;
      }
      report.total_locations = total;
      return report;
    }
  }
  throw std::runtime_error("required_level: no level within the search depth");
}

}  // namespace ftnm
