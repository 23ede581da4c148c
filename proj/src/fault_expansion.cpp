#include "ftnm/fault_expansion.hpp"

#include <cmath>

namespace ftnm {

FaultDecomposition decompose_gate(const SystemBathModel& model) {
  const int d = model.total_dim();
  if (d > max_operator_dim())
    throw std::invalid_argument("decompose_gate: total dimension exceeds limit");

  const Matrix hs_full = kron(model.system_hamiltonian, Matrix(Matrix::Identity(model.bath_dim, model.bath_dim)));
  const Matrix hb_full = kron(Matrix(Matrix::Identity(model.system_dim(), model.system_dim())), model.bath_hamiltonian);
  const Matrix h_full = hs_full + hb_full + centered_coupling(model);

  FaultDecomposition out;
  out.u = evolve(h_full, model.t0);
  out.u0 = kron(evolve(model.system_hamiltonian, model.t0), evolve(model.bath_hamiltonian, model.t0));
  out.e = out.u - out.u0;
  out.bound = model.n_system_qubits == 1 ? model.t0 * coupling_width_sum(model)
                                         : 2.0 * model.t0 * model.lambda0;
  return out;
}

double binomial_tail_bound(int n, int k, double eps, bool good_is_unitary) {
  if (n < 0 || k < 0 || k > n)
    throw std::invalid_argument("binomial_tail_bound: need 0 <= k <= n");
  if (eps < 0.0) throw std::invalid_argument("binomial_tail_bound: eps must be >= 0");
  double binom = 1.0;
  for (int i = 1; i <= k; ++i) binom *= static_cast<double>(n - k + i) / i;
  double b = binom * std::pow(eps, k);
  if (!good_is_unitary) b *= std::pow(1.0 + eps, n - k);
  return b;
}

Matrix interaction_picture(const Matrix& e, const Matrix& u0) {
  detail::require_nonempty_square(e, "interaction_picture(E)");
  detail::require_nonempty_square(u0, "interaction_picture(U0)");
  if (e.rows() != u0.rows())
    throw std::invalid_argument("interaction_picture: dimension mismatch");
  if (!is_unitary(u0))
    throw std::invalid_argument("interaction_picture: frame operator is not unitary");
  return u0 * e * u0.adjoint();
}

double fault_path_norm_bound(int k, double lambda0, double t0) {
  if (k < 0) throw std::invalid_argument("fault_path_norm_bound: fault count must be >= 0");
  if (lambda0 < 0.0 || t0 < 0.0)
    throw std::invalid_argument("fault_path_norm_bound: lambda0 and t0 must be >= 0");
  return std::pow(2.0 * lambda0 * t0, k);
}

std::vector<FaultPathTerm> enumerate_fault_paths(const std::vector<SplitLocation>& locations) {
  const int n = static_cast<int>(locations.size());
  if (n < 1 || n > 20) throw std::invalid_argument("enumerate_fault_paths: need 1..20 locations");
  const Eigen::Index d = locations.front().u0.rows();
  for (const SplitLocation& loc : locations) {
    detail::require_nonempty_square(loc.u0, "enumerate_fault_paths(u0)");
    detail::require_nonempty_square(loc.e, "enumerate_fault_paths(e)");
    if (loc.u0.rows() != d || loc.e.rows() != d)
      throw std::invalid_argument("enumerate_fault_paths: dimension mismatch");
  }

  std::vector<FaultPathTerm> terms;
  terms.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    Matrix op = Matrix::Identity(d, d);
    // Location 0 acts first, so it sits rightmost in the product.
    for (int i = 0; i < n; ++i) {
      const Matrix& factor = (mask >> i) & 1u ? locations[i].e : locations[i].u0;
      op = factor * op;
    }
    terms.push_back({mask, std::move(op)});
  }
  return terms;
}

UnitarySplit random_unitary_split(Rng& rng, int dim, double eps) {
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("random_unitary_split: eps must lie in [0, 1]");
  UnitarySplit s;
  s.u = random_unitary(rng, dim);
  // G = U * exp(-iK) stays unitary; ||U - G|| = max |1 - e^{i lambda}| over
  // eigenvalues of K, which is 2 sin(||K||/2) <= eps by the radius choice.
  const double radius = 2.0 * std::asin(0.5 * eps) * rng.uniform(0.5, 1.0);
  Matrix k = random_hermitian(rng, dim);
  const double k_norm = op_norm(k);
  if (k_norm > 1e-12) k *= radius / k_norm;
  s.g = s.u * evolve(k, 1.0);
  s.b = s.u - s.g;
  return s;
}

double IntervalCircuit::total_duration() const {
  double t = 0.0;
  for (const CircuitInterval& iv : intervals) t += iv.duration;
  return t;
}

int IntervalCircuit::dim() const {
  return intervals.empty() ? 0 : static_cast<int>(intervals.front().uncoupled.rows());
}

IntervalCircuit make_interval_circuit(std::vector<CircuitInterval> intervals) {
  if (intervals.empty()) throw std::invalid_argument("make_interval_circuit: no intervals");
  const Eigen::Index d = intervals.front().uncoupled.rows();
  for (const CircuitInterval& iv : intervals) {
    if (iv.duration <= 0.0)
      throw std::invalid_argument("make_interval_circuit: durations must be positive");
    require_hermitian(iv.uncoupled, "make_interval_circuit(uncoupled)");
    require_hermitian(iv.coupling, "make_interval_circuit(coupling)");
    if (iv.uncoupled.rows() != d || iv.coupling.rows() != d)
      throw std::invalid_argument("make_interval_circuit: dimension mismatch across intervals");
  }
  return IntervalCircuit{std::move(intervals)};
}

TimeResolvedFaultPath make_fault_path(std::vector<TimeResolvedFault> entries) {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].time <= entries[i - 1].time)
      throw std::invalid_argument("make_fault_path: fault times must be strictly increasing");
  return TimeResolvedFaultPath{std::move(entries)};
}

IntervalCircuit random_interval_circuit(Rng& rng, int n_intervals, int dim,
                                        double coupling_scale, double min_duration,
                                        double max_duration) {
  if (n_intervals < 1)
    throw std::invalid_argument("random_interval_circuit: need at least one interval");
  if (min_duration <= 0.0 || max_duration < min_duration)
    throw std::invalid_argument("random_interval_circuit: bad duration range");
  std::vector<CircuitInterval> intervals;
  intervals.reserve(n_intervals);
  for (int i = 0; i < n_intervals; ++i) {
    CircuitInterval iv;
    iv.duration = rng.uniform(min_duration, max_duration);
    iv.uncoupled = random_hermitian(rng, dim);
    iv.coupling = coupling_scale * random_hermitian(rng, dim);
    intervals.push_back(std::move(iv));
  }
  return make_interval_circuit(std::move(intervals));
}

namespace {

std::vector<double> interval_starts(const IntervalCircuit& circuit) {
  std::vector<double> starts(circuit.intervals.size() + 1, 0.0);
  for (std::size_t i = 0; i < circuit.intervals.size(); ++i)
    starts[i + 1] = starts[i] + circuit.intervals[i].duration;
  return starts;
}

}  // namespace

Matrix free_evolution(const IntervalCircuit& circuit, double a, double b) {
  if (b < a) throw std::invalid_argument("free_evolution: requires a <= b");
  const std::vector<double> starts = interval_starts(circuit);
  const double total = starts.back();
  if (a < -1e-12 || b > total + 1e-12)
    throw std::invalid_argument("free_evolution: window outside circuit span");

  const int d = circuit.dim();
  Matrix u = Matrix::Identity(d, d);
  for (std::size_t i = 0; i < circuit.intervals.size(); ++i) {
    const double lo = std::max(a, starts[i]);
    const double hi = std::min(b, starts[i + 1]);
    if (hi <= lo) continue;
    u = evolve(circuit.intervals[i].uncoupled, hi - lo) * u;
  }
  return u;
}

SpreadIdentityReport verify_spread_identity(const IntervalCircuit& circuit,
                                            const TimeResolvedFaultPath& faults) {
  const std::vector<double> starts = interval_starts(circuit);
  const double total = starts.back();
  const int d = circuit.dim();

  // Per-interval fault operator: coupled minus uncoupled interval evolution.
  std::vector<Matrix> fault_ops;
  fault_ops.reserve(circuit.intervals.size());
  for (const CircuitInterval& iv : circuit.intervals)
    fault_ops.push_back(evolve(iv.uncoupled + iv.coupling, iv.duration) -
                        evolve(iv.uncoupled, iv.duration));

  for (const TimeResolvedFault& f : faults.entries) {
    if (f.interval < 0 || f.interval >= static_cast<int>(circuit.intervals.size()))
      throw std::invalid_argument("verify_spread_identity: fault interval out of range");
    if (f.time < starts[f.interval] - 1e-12 || f.time > starts[f.interval + 1] + 1e-12)
      throw std::invalid_argument("verify_spread_identity: fault time outside its interval");
  }

  // Faulty path: free evolution with each fault operator inserted
  // instantaneously at its fault time, then referred back through the full
  // free evolution.
  Matrix path = Matrix::Identity(d, d);
  double cursor = 0.0;
  for (const TimeResolvedFault& f : faults.entries) {
    path = free_evolution(circuit, cursor, f.time) * path;
    path = fault_ops[f.interval] * path;
    cursor = f.time;
  }
  path = free_evolution(circuit, cursor, total) * path;
  const Matrix lhs = path * free_evolution(circuit, 0.0, total).adjoint();

  // Product of forward-propagated faults, latest leftmost.
  Matrix rhs = Matrix::Identity(d, d);
  for (const TimeResolvedFault& f : faults.entries) {
    const Matrix frame = free_evolution(circuit, f.time, total);
    rhs = (frame * fault_ops[f.interval] * frame.adjoint()) * rhs;
  }

  return SpreadIdentityReport{op_norm(lhs - rhs)};
}

std::vector<GateBoundSample> gate_bound_sweep(int trials, int n_system_qubits, int max_bath_dim,
                                              double t0_min, double t0_max, std::uint64_t seed,
                                              double slack, double bound_scale) {
  if (trials < 1) throw std::invalid_argument("gate_bound_sweep: need trials >= 1");
  if (max_bath_dim < 2) throw std::invalid_argument("gate_bound_sweep: need max_bath_dim >= 2");
  if (t0_min <= 0.0 || t0_max < t0_min)
    throw std::invalid_argument("gate_bound_sweep: need 0 < t0_min <= t0_max");

  Rng root(seed);
  std::vector<GateBoundSample> samples;
  samples.reserve(trials);
  for (int i = 0; i < trials; ++i) {
    Rng rng = root.substream(static_cast<std::uint64_t>(i));
    const int bath_dim = 2 + static_cast<int>(rng.integer(max_bath_dim - 1));
    const double t0 = rng.uniform(t0_min, t0_max);
    const SystemBathModel model = random_model(rng, n_system_qubits, bath_dim, t0);
    const FaultDecomposition dec = decompose_gate(model);

    GateBoundSample s;
    s.index = i;
    s.n_system_qubits = n_system_qubits;
    s.bath_dim = bath_dim;
    s.t0 = t0;
    s.e_norm = op_norm(dec.e);
    s.bound = bound_scale * dec.bound;
    s.ok = s.e_norm <= s.bound + slack;
    samples.push_back(s);
  }
  return samples;
}

}  // namespace ftnm
