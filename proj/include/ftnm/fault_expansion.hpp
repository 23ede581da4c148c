#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ftnm/bath_model.hpp"
#include "ftnm/operators.hpp"
#include "ftnm/random.hpp"

// Splitting noisy gates into an uncoupled part plus a fault operator,
// expanding circuits over fault paths, and the interaction-picture spread
// identity that rewrites a time-resolved fault path as a product of
// forward-propagated faults.

namespace ftnm {

// U = U0 + E for one noisy gate: U is the coupled evolution, U0 the
// uncoupled system (x) bath evolution, E the fault operator.  `bound` is the
// claimed norm bound on E: t0 * width for one-qubit models, 2 * t0 * lambda0
// for two-qubit models.
struct FaultDecomposition {
  Matrix u;
  Matrix u0;
  Matrix e;
  double bound = 0.0;
};

// Exponentiates the model over one gate time with the coupling replaced by
// its norm-minimizing shifted representative (the shift is pure gauge for
// the coupled evolution but makes U - U0 small).
FaultDecomposition decompose_gate(const SystemBathModel& model);

// C(n,k) * eps^k, times (1+eps)^(n-k) unless the good parts are unitary.
// Norm bound on the sum of all expansion terms carrying at least k faults.
double binomial_tail_bound(int n, int k, double eps, bool good_is_unitary);

// U0 * E * U0^dag.  Norm-preserving conjugation into the frame after U0.
Matrix interaction_picture(const Matrix& e, const Matrix& u0);

// (2 * lambda0 * t0)^k: norm bound on a fault-path operator with k faults.
double fault_path_norm_bound(int k, double lambda0, double t0);

// ---------------------------------------------------------------------------
// Fault-path expansion of a product of split gates

// One location in temporal order (index 0 acts first): gate = u0 + e.
struct SplitLocation {
  Matrix u0;
  Matrix e;
};

struct FaultPathTerm {
  std::uint32_t mask = 0;  // bit i set: location i carries its fault operator
  Matrix op;
};

// All 2^n terms of prod_i (u0_i + e_i), ordered by mask.  The mask-0 term is
// the fault-free path; the terms sum to the full product.
std::vector<FaultPathTerm> enumerate_fault_paths(const std::vector<SplitLocation>& locations);

// Unitary U split as G + B with both factors unitary and ||B|| <= eps;
// exercises both binomial tail bounds at once.
struct UnitarySplit {
  Matrix u;
  Matrix g;
  Matrix b;
};

UnitarySplit random_unitary_split(Rng& rng, int dim, double eps);

// ---------------------------------------------------------------------------
// Time-resolved spread identity

// One circuit interval: evolve for `duration` under uncoupled + coupling.
// All matrices share the circuit's full Hilbert space.
struct CircuitInterval {
  double duration = 0.0;
  Matrix uncoupled;  // Hermitian
  Matrix coupling;   // Hermitian
};

struct IntervalCircuit {
  std::vector<CircuitInterval> intervals;

  double total_duration() const;
  int dim() const;
};

IntervalCircuit make_interval_circuit(std::vector<CircuitInterval> intervals);

// A fault pinned to an interval at an absolute time inside it.
struct TimeResolvedFault {
  int interval = 0;
  double time = 0.0;
};

struct TimeResolvedFaultPath {
  std::vector<TimeResolvedFault> entries;  // strictly increasing times

  int k() const { return static_cast<int>(entries.size()); }
};

TimeResolvedFaultPath make_fault_path(std::vector<TimeResolvedFault> entries);

// Random circuit for identity checks: independent Hermitian uncoupled and
// coupling parts per interval, durations uniform in the given range.
IntervalCircuit random_interval_circuit(Rng& rng, int n_intervals, int dim,
                                        double coupling_scale = 0.5, double min_duration = 0.5,
                                        double max_duration = 1.5);

// Uncoupled evolution of the circuit from absolute time a to b.
Matrix free_evolution(const IntervalCircuit& circuit, double a, double b);

struct SpreadIdentityReport {
  double lhs_rhs_distance = 0.0;
};

// Checks that the faulty path, referred back through the free evolution,
// equals the reverse-ordered product of interaction-picture faults
// U0(T,t_m) * E_m * U0(T,t_m)^dag.  Each fault inserts its interval's fault
// operator (coupled minus uncoupled interval evolution) instantaneously at
// its fault time; the identity is then exact, so the distance reported
// should sit at rounding level.
SpreadIdentityReport verify_spread_identity(const IntervalCircuit& circuit,
                                            const TimeResolvedFaultPath& faults);

// ---------------------------------------------------------------------------
// Randomized gate-bound sweep (shared by CLI and acceptance checks)

struct GateBoundSample {
  int index = 0;
  int n_system_qubits = 1;
  int bath_dim = 1;
  double t0 = 0.0;
  double e_norm = 0.0;
  double bound = 0.0;
  bool ok = true;
};

// Draws random models and checks ||E|| <= bound_scale * bound + slack for
// each.  bound_scale < 1 deliberately weakens the claimed bound; it exists
// so the violation-reporting path itself can be exercised.
std::vector<GateBoundSample> gate_bound_sweep(int trials, int n_system_qubits, int max_bath_dim,
                                              double t0_min, double t0_max, std::uint64_t seed,
                                              double slack = 1e-9, double bound_scale = 1.0);

}  // namespace ftnm
