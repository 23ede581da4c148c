#include "ftnm/bath_model.hpp"

#include <cmath>

namespace ftnm {

Matrix pauli(int k) {
  Matrix m(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: label must be 0..3");
  }
  return m;
}

Matrix pauli_on(int n_qubits, int qubit, int k) {
  if (n_qubits < 1) throw std::invalid_argument("pauli_on: need at least one qubit");
  if (qubit < 0 || qubit >= n_qubits) throw std::invalid_argument("pauli_on: qubit out of range");
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q)
    out = kron(out, q == qubit ? pauli(k) : Matrix(Matrix::Identity(2, 2)));
  return out;
}

SpectrumSummary spectral_width(const Matrix& h) {
  const auto [lo, hi] = eigenvalue_range(h);
  SpectrumSummary s;
  s.mu_min = lo;
  s.mu_max = hi;
  s.delta = 0.5 * (hi - lo);
  s.alpha_opt = -0.5 * (hi + lo);
  return s;
}

double min_fidelity_analytic(double delta, double t) {
  const double x = delta * t;
  if (x < 0.0 || x > M_PI_2 + 1e-12)
    throw std::domain_error("min_fidelity_analytic: delta*t must lie in [0, pi/2]");
  return std::cos(std::min(x, M_PI_2));
}

StateVector worst_state(const Matrix& h) {
  require_hermitian(h, "worst_state");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("worst_state: eigendecomposition failed");
  const Vector lo = phase_fixed(es.eigenvectors().col(0));
  const Vector hi = phase_fixed(es.eigenvectors().col(h.rows() - 1));
  return make_state(hi + lo);
}

double depolarizing_fidelity(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("depolarizing_fidelity: probability must lie in [0, 1]");
  return std::sqrt(1.0 - 0.5 * p);
}

namespace {

// A_k must carry nontrivial coupling: reject anything proportional to I.
void require_nontrivial_bath_op(const Matrix& a) {
  const double d = static_cast<double>(a.rows());
  const Complex mean = a.trace() / d;
  const Matrix traceless = a - mean * Matrix::Identity(a.rows(), a.cols());
  if (traceless.cwiseAbs().maxCoeff() <= 1e-12)
    throw std::invalid_argument(
        "make_system_bath_model: bath operator is proportional to identity");
}

}  // namespace

SystemBathModel make_system_bath_model(int n_system_qubits, int bath_dim,
                                       std::vector<CouplingTerm> coupling_terms,
                                       Matrix system_hamiltonian, Matrix bath_hamiltonian,
                                       double t0, double lambda0) {
  if (n_system_qubits != 1 && n_system_qubits != 2)
    throw std::invalid_argument("make_system_bath_model: n_system_qubits must be 1 or 2");
  if (bath_dim < 1) throw std::invalid_argument("make_system_bath_model: bath_dim must be >= 1");
  if (t0 <= 0.0) throw std::invalid_argument("make_system_bath_model: t0 must be positive");
  if (lambda0 < 0.0) throw std::invalid_argument("make_system_bath_model: lambda0 must be >= 0");

  SystemBathModel m;
  m.n_system_qubits = n_system_qubits;
  m.bath_dim = bath_dim;
  m.coupling_terms = std::move(coupling_terms);
  m.system_hamiltonian = std::move(system_hamiltonian);
  m.bath_hamiltonian = std::move(bath_hamiltonian);
  m.t0 = t0;
  m.lambda0 = lambda0;

  require_hermitian(m.system_hamiltonian, "make_system_bath_model(system_hamiltonian)");
  require_hermitian(m.bath_hamiltonian, "make_system_bath_model(bath_hamiltonian)");
  if (m.system_hamiltonian.rows() != m.system_dim())
    throw std::invalid_argument("make_system_bath_model: system Hamiltonian dimension mismatch");
  if (m.bath_hamiltonian.rows() != bath_dim)
    throw std::invalid_argument("make_system_bath_model: bath Hamiltonian dimension mismatch");

  for (const CouplingTerm& term : m.coupling_terms) {
    if (term.qubit < 0 || term.qubit >= n_system_qubits)
      throw std::invalid_argument("make_system_bath_model: coupling term qubit out of range");
    if (term.pauli < 1 || term.pauli > 3)
      throw std::invalid_argument("make_system_bath_model: pauli label must be 1, 2, or 3");
    require_hermitian(term.bath_op, "make_system_bath_model(bath_op)");
    if (term.bath_op.rows() != bath_dim)
      throw std::invalid_argument("make_system_bath_model: bath operator dimension mismatch");
    require_nontrivial_bath_op(term.bath_op);
  }

  for (int q = 0; q < n_system_qubits; ++q) {
    const Matrix hq = qubit_coupling(m, q);
    if (hq.rows() == 0) continue;  // qubit without coupling terms
    if (spectral_width(hq).delta > lambda0 + 1e-12)
      throw std::invalid_argument(
          "make_system_bath_model: per-qubit coupling width exceeds lambda0");
  }
  return m;
}

Matrix qubit_coupling(const SystemBathModel& model, int qubit) {
  if (qubit < 0 || qubit >= model.n_system_qubits)
    throw std::invalid_argument("qubit_coupling: qubit out of range");
  Matrix h = Matrix::Zero(2 * model.bath_dim, 2 * model.bath_dim);
  bool any = false;
  for (const CouplingTerm& term : model.coupling_terms) {
    if (term.qubit != qubit) continue;
    h += kron(pauli(term.pauli), term.bath_op);
    any = true;
  }
  if (!any) return Matrix();
  return h;
}

Matrix full_coupling(const SystemBathModel& model) {
  const int d = model.total_dim();
  Matrix h = Matrix::Zero(d, d);
  for (const CouplingTerm& term : model.coupling_terms)
    h += kron(pauli_on(model.n_system_qubits, term.qubit, term.pauli), term.bath_op);
  return h;
}

Matrix centered_coupling(const SystemBathModel& model) {
  const int d = model.total_dim();
  Matrix h = full_coupling(model);
  for (int q = 0; q < model.n_system_qubits; ++q) {
    const Matrix hq = qubit_coupling(model, q);
    if (hq.rows() == 0) continue;
    h += spectral_width(hq).alpha_opt * Matrix::Identity(d, d);
  }
  return h;
}

double coupling_width_sum(const SystemBathModel& model) {
  double sum = 0.0;
  for (int q = 0; q < model.n_system_qubits; ++q) {
    const Matrix hq = qubit_coupling(model, q);
    if (hq.rows() == 0) continue;
    sum += spectral_width(hq).delta;
  }
  return sum;
}

FidelityDecayReport verify_fidelity_decay(const SystemBathModel& model, double t, int n_samples,
                                          std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("verify_fidelity_decay: need n_samples >= 1");
  if (model.system_hamiltonian.cwiseAbs().maxCoeff() > 1e-12 ||
      model.bath_hamiltonian.cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument(
        "verify_fidelity_decay: requires zero system and bath Hamiltonians");

  const Matrix h = full_coupling(model);
  const SpectrumSummary s = spectral_width(h);
  if (s.delta * t > M_PI_2 + 1e-12)
    throw std::domain_error("verify_fidelity_decay: delta*t must not exceed pi/2");

  // Unshifted evolution: the identity shift only changes a global phase, so
  // survival fidelities match the centered representative exactly.
  const Matrix u = evolve(h, t);

  FidelityDecayReport report;
  report.analytic_floor = min_fidelity_analytic(s.delta, t);

  Rng rng(seed);
  double min_f = 1.0;
  for (int i = 0; i < n_samples; ++i) {
    const Vector psi = random_state_vector(rng, static_cast<int>(h.rows()));
    min_f = std::min(min_f, std::abs(psi.dot(u * psi)));
  }
  report.min_sampled_fidelity = min_f;

  const StateVector w = worst_state(h);
  report.worst_state_fidelity = std::abs(w.amplitudes.dot(u * w.amplitudes));
  return report;
}

SystemBathModel random_model(Rng& rng, int n_system_qubits, int bath_dim, double t0,
                             bool zero_internal, double coupling_scale) {
  std::vector<CouplingTerm> terms;
  for (int q = 0; q < n_system_qubits; ++q) {
    const int n_terms = 1 + static_cast<int>(rng.integer(3));
    for (int i = 0; i < n_terms; ++i) {
      CouplingTerm term;
      term.qubit = q;
      term.pauli = 1 + static_cast<int>(rng.integer(3));
      term.bath_op = coupling_scale * random_hermitian(rng, bath_dim);
      terms.push_back(std::move(term));
    }
  }

  const int sys_dim = 1 << n_system_qubits;
  Matrix hs = zero_internal ? Matrix::Zero(sys_dim, sys_dim) : random_hermitian(rng, sys_dim);
  Matrix hb = zero_internal ? Matrix::Zero(bath_dim, bath_dim) : random_hermitian(rng, bath_dim);

  // Tight lambda0: the largest realized per-qubit width.
  SystemBathModel probe;
  probe.n_system_qubits = n_system_qubits;
  probe.bath_dim = bath_dim;
  probe.coupling_terms = terms;
  double lambda0 = 0.0;
  for (int q = 0; q < n_system_qubits; ++q) {
    const Matrix hq = qubit_coupling(probe, q);
    if (hq.rows() == 0) continue;
    lambda0 = std::max(lambda0, spectral_width(hq).delta);
  }

  return make_system_bath_model(n_system_qubits, bath_dim, std::move(terms), std::move(hs),
                                std::move(hb), t0, lambda0);
}

}  // namespace ftnm
