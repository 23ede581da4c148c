#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ftnm/operators.hpp"
#include "ftnm/random.hpp"

using namespace ftnm;

namespace {

// Independent norm oracles via a fresh decomposition of A^dag A.
double svd_largest(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double svd_sum(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

Matrix exp_oracle(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("operator norm on explicit matrices") {
    CHECK(op_norm(Matrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-14));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -1.0;
    CHECK(op_norm(d) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(trace_norm(d) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(trace_norm(Matrix::Identity(2, 2)) == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("norms match an independent decomposition on random matrices") {
    Rng rng(101);
    for (int i = 0; i < 20; ++i) {
      const Matrix a = random_matrix(rng, 8, 8);
      CHECK(std::abs(op_norm(a) - svd_largest(a)) <= 1e-10);
      CHECK(std::abs(trace_norm(a) - svd_sum(a)) <= 1e-10);
      CHECK(trace_norm(a) >= op_norm(a) - 1e-12);
    }
  }

  TEST_CASE("norm inequalities hold on random pairs") {
    Rng rng(102);
    for (int i = 0; i < 25; ++i) {
      const Matrix a = random_matrix(rng, 6, 6);
      const Matrix b = random_matrix(rng, 6, 6);
      CHECK(op_norm(a + b) <= op_norm(a) + op_norm(b) + 1e-10);
      CHECK(op_norm(a * b) <= op_norm(a) * op_norm(b) + 1e-10);
      const Matrix u = random_unitary(rng, 6);
      const Matrix v = random_unitary(rng, 6);
      CHECK(std::abs(op_norm(u * a * v) - op_norm(a)) <= 1e-10);
    }
  }

  TEST_CASE("malformed operators are rejected") {
    CHECK_THROWS_AS(op_norm(Matrix(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(trace_norm(Matrix(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(evolve(Matrix(3, 2), 1.0), std::invalid_argument);
  }

  TEST_CASE("dimension cap is enforced and adjustable") {
    const int saved = max_operator_dim();
    set_max_operator_dim(4);
    CHECK_THROWS_AS(op_norm(Matrix::Identity(8, 8)), std::invalid_argument);
    set_max_operator_dim(saved);
    CHECK_NOTHROW(op_norm(Matrix::Identity(8, 8)));
  }

  TEST_CASE("evolve produces the exact unitary") {
    Rng rng(103);
    const Matrix h = random_hermitian(rng, 8);

    SUBCASE("zero time gives the identity") {
      CHECK(op_norm(evolve(h, 0.0) - Matrix::Identity(8, 8)) <= 1e-12);
    }
    SUBCASE("diagonal case matches the closed form") {
      Matrix d = Matrix::Zero(2, 2);
      d(0, 0) = 1.0;
      d(1, 1) = -1.0;
      const double t = 0.7;
      const Matrix u = evolve(d, t);
      CHECK(std::abs(u(0, 0) - std::exp(Complex(0, -t))) <= 1e-14);
      CHECK(std::abs(u(1, 1) - std::exp(Complex(0, t))) <= 1e-14);
      CHECK(std::abs(u(0, 1)) <= 1e-14);
    }
    SUBCASE("unitary within 1e-12 and matches the eigendecomposition oracle") {
      const Matrix u = evolve(h, 0.3);
      CHECK(op_norm(u.adjoint() * u - Matrix::Identity(8, 8)) <= 1e-12);
      CHECK(op_norm(u - exp_oracle(h, 0.3)) <= 1e-10);
    }
    SUBCASE("group property") {
      CHECK(op_norm(evolve(h, 0.2) * evolve(h, 0.5) - evolve(h, 0.7)) <= 1e-10);
    }
    SUBCASE("non-Hermitian input is rejected") {
      Matrix bad = Matrix::Zero(2, 2);
      bad(0, 1) = 1.0;
      CHECK_THROWS_AS(evolve(bad, 1.0), std::invalid_argument);
    }
  }

  TEST_CASE("hermitian helpers") {
    Rng rng(104);
    const Matrix a = random_matrix(rng, 5, 5);
    const Matrix h = hermitian_part(a);
    CHECK(is_hermitian(h));
    CHECK(op_norm(h - (a + a.adjoint()) / 2.0) <= 1e-14);
    CHECK_FALSE(is_hermitian(a));
    CHECK(is_unitary(random_unitary(rng, 5)));
    CHECK_FALSE(is_unitary(2.0 * Matrix::Identity(3, 3)));
  }

  TEST_CASE("eigenvalue range matches a direct solve") {
    Rng rng(105);
    const Matrix h = random_hermitian(rng, 12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    const auto [lo, hi] = eigenvalue_range(h);
    CHECK(std::abs(lo - es.eigenvalues().minCoeff()) <= 1e-10);
    CHECK(std::abs(hi - es.eigenvalues().maxCoeff()) <= 1e-10);
  }

  TEST_CASE("kron multiplies dimensions and norms") {
    Rng rng(106);
    const Matrix a = random_matrix(rng, 3, 3);
    const Matrix b = random_matrix(rng, 4, 4);
    const Matrix k = kron(a, b);
    CHECK(k.rows() == 12);
    CHECK(std::abs(op_norm(k) - op_norm(a) * op_norm(b)) <= 1e-10);
  }

  TEST_CASE("states normalize and reject the zero vector") {
    Vector v(2);
    v << Complex(3.0, 0.0), Complex(0.0, 4.0);
    const StateVector s = make_state(v);
    CHECK(std::abs(s.amplitudes.norm() - 1.0) <= 1e-14);
    CHECK(std::abs(s.amplitudes(0) - Complex(0.6, 0.0)) <= 1e-14);
    CHECK_THROWS_AS(make_state(Vector::Zero(3)), std::invalid_argument);
  }

  TEST_CASE("fidelity is a phase-invariant overlap") {
    Rng rng(107);
    const StateVector a = make_state(random_state_vector(rng, 6));
    const StateVector b = make_state(random_state_vector(rng, 6));
    const double f = fidelity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    StateVector rotated = b;
    rotated.amplitudes *= std::exp(Complex(0.0, 1.234));
    CHECK(std::abs(fidelity(a, rotated) - f) <= 1e-12);
  }

  TEST_CASE("phase fixing leaves the ray unchanged") {
    Rng rng(108);
    const StateVector s = make_state(random_state_vector(rng, 5));
    const Vector fixed = phase_fixed(s.amplitudes);
    Eigen::Index first = 0;
    while (std::abs(fixed(first)) < 1e-8) ++first;
    CHECK(fixed(first).imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fixed(first).real() > 0.0);
    CHECK(std::abs(std::abs(fixed.dot(s.amplitudes)) - 1.0) <= 1e-12);
  }

  TEST_CASE("variation distance sums absolute differences") {
    RealVector p(2), q(2);
    p << 1.0, 0.0;
    q << 0.0, 1.0;
    CHECK(variation_distance(make_probability(p), make_probability(q)) ==
          doctest::Approx(2.0).epsilon(1e-14));

    RealVector r(2), s(2);
    r << 0.75, 0.25;
    s << 0.5, 0.5;
    CHECK(variation_distance(make_probability(r), make_probability(s)) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(variation_distance(make_probability(r), make_probability(r)) == 0.0);
  }

  TEST_CASE("probability vectors are validated") {
    RealVector bad_sum(2);
    bad_sum << 0.6, 0.6;
    CHECK_THROWS_AS(make_probability(bad_sum), std::invalid_argument);

    RealVector negative(2);
    negative << 1.5, -0.5;
    CHECK_THROWS_AS(make_probability(negative), std::invalid_argument);

    RealVector p(3), q(2);
    p << 0.2, 0.3, 0.5;
    q << 0.5, 0.5;
    CHECK_THROWS_AS(variation_distance(make_probability(p), make_probability(q)),
                    std::invalid_argument);
  }

  TEST_CASE("seeded streams are reproducible and distinct across substreams") {
    Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

    Rng c = Rng(99).substream(1);
    Rng d = Rng(99).substream(2);
    bool differs = false;
    for (int i = 0; i < 8; ++i) differs |= (c.uniform() != d.uniform());
    CHECK(differs);
  }
}
