#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ftnm/operators.hpp"

// Seeded sampling helpers.  mt19937_64 output is fixed by the standard, and
// the uniform/gaussian transforms below are written out by hand, so a given
// seed yields the same stream on every platform (std::*_distribution would
// not guarantee that).

namespace ftnm {

namespace detail {
// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound); simple rejection to avoid modulo bias.
  std::uint64_t integer(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::integer: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  // Standard normal via Box-Muller (pair cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Independent generator for a labelled subtask; insensitive to how much of
  // this stream has already been consumed.
  Rng substream(std::uint64_t label) const {
    return Rng(detail::mix64(seed_ ^ detail::mix64(label)));
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline Complex random_complex_gaussian(Rng& rng) {
  const double re = rng.gaussian();
  const double im = rng.gaussian();
  return Complex(re, im);
}

inline Vector random_state_vector(Rng& rng, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = random_complex_gaussian(rng);
  const double norm = v.norm();
  if (norm < 1e-12) return random_state_vector(rng, dim);
  return Vector(v / norm);
}

inline Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_complex_gaussian(rng);
  return m;
}

// GUE-style Hermitian sample, rescaled so entries stay O(1).
inline Matrix random_hermitian(Rng& rng, int dim) {
  const Matrix m = random_matrix(rng, dim, dim);
  return Matrix(0.5 * (m + m.adjoint()));
}

// Haar-ish unitary: QR of a complex Gaussian matrix with the R diagonal's
// phases absorbed into Q.
inline Matrix random_unitary(Rng& rng, int dim) {
  const Matrix m = random_matrix(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  Vector phases(dim);
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    phases(i) = std::abs(d) > 1e-14 ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return Matrix(q * phases.asDiagonal());
}

}  // namespace ftnm
