#pragma once

#include <cstdint>
#include <vector>

// The concatenation recursion for the norm of a rectangle's bad part, its
// closed-form threshold, and the level solver that turns a target output
// accuracy into a concatenation depth.
//
// One recursion level maps the level-(r-1) bad-part norm x to
//   x' = C(A_C,2) * x^2 * (1+x)^(A_C-2),
// i.e. at least two of the A_C child rectangles must be bad while the rest
// contribute norm at most 1 + x each.  Convergence for small starting values
// gives the threshold eta_c = 1 / (e * A_C * (A_C-1)) on eta = lambda0*t0.

namespace ftnm {

struct ThresholdParams {
  int locations_per_rectangle = 10;  // A_C
  double eta = 0.0;                  // lambda0 * t0
  int base_locations = 1;            // N
  double epsilon_target = 1e-6;
};

// How the level-1 bad norm x_1 is seeded from eta.
enum class BaseRule {
  // C(A_C,2) * (2 eta)^2 * (1 + 2 eta)^(A_C-2): per-location fault norm
  // 2*eta (two-qubit worst case) fed through one recursion step.
  LocationProduct,
  // 2 * (A_C * eta)^2: the clustered-bath bound on rectangles with at least
  // two faulty locations.
  Cluster,
};

struct RecursionLevel {
  int level = 0;
  double x = 0.0;      // bad-norm bound; 0 once it underflows
  double log_x = 0.0;  // natural log, exact far past underflow
};

struct RecursionTrace {
  std::vector<RecursionLevel> levels;
  bool converged = false;
  bool diverged = false;
};

// 1 / (e * A_C * (A_C - 1)).
double threshold_value(int a_c);

// C(A_C,2) * x^2 * (1+x)^(A_C-2).
double recursion_step(double x, int a_c);

// Level-1 seed under the given rule.
double base_bad_norm(int a_c, double eta, BaseRule rule);

// 2 * (A_C * eta)^2.
double cluster_base_bound(int a_c, double eta);

// Runs the recursion in log space (the iterates decay doubly exponentially,
// far below the smallest double).  Records levels until r_max, stopping
// early only on divergence (x > 1); converged is set when an iterate drops
// below epsilon_target while decreasing, or below the 1e-300 floor.
RecursionTrace iterate_recursion(const ThresholdParams& params, int r_max, BaseRule rule);

// Bisects eta over (0, 1) for the convergence/divergence boundary of
// iterate_recursion; never below threshold_value (the formula is a
// sufficient condition).
double empirical_threshold(int a_c, BaseRule rule, double tol);

// N * x * (1+x)^(N-1): union bound over the N top-level rectangles.
double global_bad_bound(int base_locations, double rectangle_bad_norm);

// sqrt(2 eps) + 16 eps: variation-distance penalty of the final output when
// the global bad norm is eps; only valid for eps < 1/2.
double output_distance_bound(double eps);

// Largest x with recursion_step(x) = x besides zero; iterates diverge above
// it and collapse below it.
double nonzero_fixed_point(int a_c);

struct LevelReport {
  int level = 0;
  std::uint64_t total_locations = 0;  // N * A_C^r
  double eps_prime = 0.0;             // solved from output_distance_bound(eps') = target
};

// Smallest concatenation level whose global bad norm keeps the output
// distance within params.epsilon_target.  Requires eta below the threshold.
LevelReport required_level(const ThresholdParams& params, BaseRule rule);

}  // namespace ftnm
