#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

// Core operator utilities: norms, distances, Hamiltonian evolution, and the
// small validated value types (Operator, StateVector, ProbabilityVector) the
// rest of the library builds on.  All matrices are dense, double precision.

namespace ftnm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Absolute entrywise tolerance used when deciding whether a matrix counts as
// Hermitian.  Inputs further from self-adjointness than this are rejected.
inline constexpr double kHermitianTol = 1e-12;

// Operators above this dimension are rejected; the library targets desk-scale
// dense numerics, not large-scale simulation.  Adjustable at startup.
int max_operator_dim();
void set_max_operator_dim(int dim);

namespace detail {

template <typename Derived>
void require_nonempty_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() == 0 || a.cols() == 0)
    throw std::invalid_argument(std::string(what) + ": empty matrix");
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(what) + ": matrix must be square, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  if (a.rows() > max_operator_dim())
    throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(a.rows()) +
                                " exceeds limit " + std::to_string(max_operator_dim()));
}

}  // namespace detail

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = kHermitianTol) {
  if (a.rows() != a.cols()) return false;
  const Matrix m = a;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& a, double tol = 1e-10) {
  if (a.rows() != a.cols()) return false;
  const Matrix m = a;
  const Matrix gram = m.adjoint() * m;
  return (gram - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, const char* what,
                       double tol = kHermitianTol) {
  detail::require_nonempty_square(a, what);
  if (!is_hermitian(a, tol))
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian within tolerance");
}

// Explicit symmetrization (A + A^dag)/2 for callers that want to repair
// round-off drift before a Hermitian-only entry point.  Opt-in; nothing in the
// library symmetrizes silently.
template <typename Derived>
Matrix hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  detail::require_nonempty_square(a, "hermitian_part");
  const Matrix m = a;
  return Matrix(0.5 * (m + m.adjoint()));
}

// Operator norm (largest singular value).  Submultiplicative and unitarily
// invariant; equals the largest |eigenvalue| on Hermitian input.
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& a) {
  detail::require_nonempty_square(a, "op_norm");
  const Matrix m = a;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// Trace norm (sum of singular values).
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& a) {
  detail::require_nonempty_square(a, "trace_norm");
  const Matrix m = a;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

// Kronecker product, evaluated to a concrete matrix.
template <typename DerivedA, typename DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return Matrix(Eigen::kroneckerProduct(a.derived(), b.derived()));
}

// exp(-i H t) for Hermitian H, via eigendecomposition.  Rejects non-Hermitian
// input instead of silently falling back to a general matrix exponential.
Matrix evolve(const Matrix& h, double t);

// Largest/smallest eigenvalue of a Hermitian matrix (ascending order pair).
std::pair<double, double> eigenvalue_range(const Matrix& h);

// Rotate a vector's global phase so its first non-negligible component is real
// and positive; makes eigenvector-derived states reproducible.
Vector phase_fixed(const Vector& v);

// ---------------------------------------------------------------------------
// Validated value types

struct Operator {
  Matrix entries;
  bool hermitian_hint = false;

  int dim() const { return static_cast<int>(entries.rows()); }
};

Operator make_operator(Matrix entries, bool hermitian_hint = false);

struct StateVector {
  Vector amplitudes;  // unit norm

  int dim() const { return static_cast<int>(amplitudes.size()); }
};

// Normalizes; throws on (near-)zero input.
StateVector make_state(Vector amplitudes);

// |<a|b>| for unit vectors.
double fidelity(const StateVector& a, const StateVector& b);

struct ProbabilityVector {
  RealVector outcomes;  // nonnegative, sums to 1
};

ProbabilityVector make_probability(RealVector outcomes, double tol = 1e-12);

// Variation distance sum_i |p_i - q_i|; ranges over [0, 2].
double variation_distance(const ProbabilityVector& p, const ProbabilityVector& q);

}  // namespace ftnm
