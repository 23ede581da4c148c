#include "ftnm/operators.hpp"

#include <cmath>

namespace ftnm {

namespace {
int g_max_operator_dim = 256;
}

int max_operator_dim() { return g_max_operator_dim; }

void set_max_operator_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("set_max_operator_dim: dimension limit must be >= 1");
  g_max_operator_dim = dim;
}

Matrix evolve(const Matrix& h, double t) {
  require_hermitian(h, "evolve");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("evolve: eigendecomposition failed");
  const RealVector& lam = es.eigenvalues();
  Vector phases(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -lam(i) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

std::pair<double, double> eigenvalue_range(const Matrix& h) {
  require_hermitian(h, "eigenvalue_range");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue_range: eigendecomposition failed");
  return {es.eigenvalues()(0), es.eigenvalues()(h.rows() - 1)};
}

Vector phase_fixed(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-8) return Vector((std::conj(v(i)) / mag) * v);
  }
  return v;
}

Operator make_operator(Matrix entries, bool hermitian_hint) {
  detail::require_nonempty_square(entries, "make_operator");
  if (hermitian_hint && !is_hermitian(entries))
    throw std::invalid_argument("make_operator: hermitian_hint set but matrix is not Hermitian");
  return Operator{std::move(entries), hermitian_hint};
}

StateVector make_state(Vector amplitudes) {
  if (amplitudes.size() == 0) throw std::invalid_argument("make_state: empty vector");
  const double norm = amplitudes.norm();
  if (norm < 1e-12) throw std::invalid_argument("make_state: vector norm too small to normalize");
  return StateVector{amplitudes / norm};
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::abs(a.amplitudes.dot(b.amplitudes));
}

ProbabilityVector make_probability(RealVector outcomes, double tol) {
  if (outcomes.size() == 0) throw std::invalid_argument("make_probability: empty vector");
  if (outcomes.minCoeff() < 0.0)
    throw std::invalid_argument("make_probability: negative entry");
  if (std::abs(outcomes.sum() - 1.0) > tol)
    throw std::invalid_argument("make_probability: entries do not sum to 1");
  return ProbabilityVector{std::move(outcomes)};
}

double variation_distance(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (p.outcomes.size() != q.outcomes.size())
    throw std::invalid_argument("variation_distance: length mismatch");
  return (p.outcomes - q.outcomes).cwiseAbs().sum();
}

}  // namespace ftnm
