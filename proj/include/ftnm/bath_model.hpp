#pragma once

#include <utility>
#include <vector>

#include "ftnm/operators.hpp"
#include "ftnm/random.hpp"

// System-bath coupling models and the spectral-width decoherence measure.
// The width Delta of a coupling Hamiltonian is half its eigenvalue spread;
// it equals the smallest operator norm over identity shifts H + alpha*I and
// controls the worst-case fidelity decay cos(Delta*t).

namespace ftnm {

// sigma_0..sigma_3 = I, X, Y, Z.
Matrix pauli(int k);

// sigma_k acting on `qubit` within an n-qubit register (qubit 0 is the
// leftmost tensor factor).
Matrix pauli_on(int n_qubits, int qubit, int k);

struct SpectrumSummary {
  double mu_min = 0.0;
  double mu_max = 0.0;
  double delta = 0.0;      // (mu_max - mu_min) / 2
  double alpha_opt = 0.0;  // -(mu_max + mu_min) / 2, the norm-minimizing shift
};

// Eigenvalue range of a Hermitian operator and the shift that centers it.
// op_norm(H + alpha_opt*I) = delta, and no other shift does better.
SpectrumSummary spectral_width(const Matrix& h);

// cos(delta*t); only claimed for delta*t <= pi/2.
double min_fidelity_analytic(double delta, double t);

// Equal superposition of extremal eigenvectors (psi_max + psi_min)/sqrt(2);
// the state whose survival fidelity reaches the cos(delta*t) floor.
StateVector worst_state(const Matrix& h);

// Fidelity sqrt(1 - p/2) of a single-qubit depolarizing channel at
// depolarizing probability p, for comparison against the cosine decay.
double depolarizing_fidelity(double p);

// One Pauli-coupling term sigma_k[qubit] (x) bath_op.
struct CouplingTerm {
  int qubit = 0;
  int pauli = 3;   // 1, 2, or 3
  Matrix bath_op;  // Hermitian, not proportional to identity
};

// One- or two-qubit register coupled to a finite-dimensional bath:
//   H = H_S (x) I + I (x) H_B + sum_k sigma_k[q_k] (x) A_k.
// Two-qubit couplings are additive with a shared bath space.  lambda0 is the
// promised per-qubit width bound: spectral_width(coupling on each qubit)
// must not exceed it.
struct SystemBathModel {
  int n_system_qubits = 1;
  int bath_dim = 1;
  std::vector<CouplingTerm> coupling_terms;
  Matrix system_hamiltonian;  // dim 2^n_system_qubits
  Matrix bath_hamiltonian;    // dim bath_dim
  double t0 = 0.0;            // elementary gate time
  double lambda0 = 0.0;       // coupling-strength bound

  int system_dim() const { return 1 << n_system_qubits; }
  int total_dim() const { return system_dim() * bath_dim; }
};

SystemBathModel make_system_bath_model(int n_system_qubits, int bath_dim,
                                       std::vector<CouplingTerm> coupling_terms,
                                       Matrix system_hamiltonian, Matrix bath_hamiltonian,
                                       double t0, double lambda0);

// Coupling of a single qubit on its compact 2 x bath_dim space.
Matrix qubit_coupling(const SystemBathModel& model, int qubit);

// Full coupling Hamiltonian sum_k sigma_k[q_k] (x) A_k on the total space.
Matrix full_coupling(const SystemBathModel& model);

// Same, with each qubit's coupling replaced by its norm-minimizing shifted
// representative (H_SB[q] + alpha_opt[q] * I).
Matrix centered_coupling(const SystemBathModel& model);

// Sum over qubits of the individual coupling widths (the per-gate error
// amplitude before multiplying by t0).
double coupling_width_sum(const SystemBathModel& model);

struct FidelityDecayReport {
  double min_sampled_fidelity = 1.0;
  double analytic_floor = 1.0;
  double worst_state_fidelity = 1.0;
};

// Checks the cos(Delta*t) floor on a model with zero system and bath
// Hamiltonians: samples random initial states, records the minimum survival
// fidelity, and evaluates the floor-attaining state.
FidelityDecayReport verify_fidelity_decay(const SystemBathModel& model, double t, int n_samples,
                                          std::uint64_t seed);

// Random model for bound sweeps.  Couplings are Gaussian Hermitian bath
// operators attached to random Pauli axes; lambda0 is set to the realized
// per-qubit width maximum so the model is tight against its own bound.
SystemBathModel random_model(Rng& rng, int n_system_qubits, int bath_dim, double t0,
                             bool zero_internal = false, double coupling_scale = 1.0);

}  // namespace ftnm
