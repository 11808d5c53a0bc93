#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "posethdx/linalg.hpp"

using namespace posethdx;

TEST_CASE("jacobi diagonalizes small symmetric matrices") {
  Matrix m(2, 2);
  m(0, 0) = 2.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 2.0;
  const auto eig = jacobi_eigensystem(m);
  CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  // Residual of M v - lambda v.
  for (int i = 0; i < 2; ++i) {
    std::vector<double> v{eig.vectors(0, i), eig.vectors(1, i)};
    const auto mv = m.apply(v);
    for (int r = 0; r < 2; ++r) CHECK(mv[r] == doctest::Approx(eig.values[i] * v[r]).epsilon(1e-12));
  }
}

TEST_CASE("normalized complete graph spectrum") {
  const int n = 5;
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (r != c) m(r, c) = 1.0 / (n - 1);
  const auto vals = symmetric_eigenvalues(m);
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 1; i < n; ++i) CHECK(vals[i] == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("null space and orthonormal columns") {
  Matrix a(1, 3);
  a(0, 0) = 1.0;
  a(0, 1) = 1.0;
  a(0, 2) = 1.0;
  const Matrix ns = null_space(a);
  REQUIRE(ns.cols() == 2);
  for (int c = 0; c < 2; ++c) {
    double dot_with_row = 0.0;
    for (int r = 0; r < 3; ++r) dot_with_row += ns(r, c);
    CHECK(std::abs(dot_with_row) < 1e-12);
  }
  const Matrix gram = ns.transposed() * ns;
  CHECK(gram.max_abs_diff(Matrix::identity(2)) < 1e-12);
}

TEST_CASE("least squares recovers consistent systems") {
  Matrix a(3, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  a(2, 0) = 1.0;
  a(2, 1) = 1.0;
  const std::vector<double> x{0.5, -1.5};
  const auto b = a.apply(x);
  const auto sol = least_squares(a, b);
  CHECK(sol[0] == doctest::Approx(x[0]).epsilon(1e-12));
  CHECK(sol[1] == doctest::Approx(x[1]).epsilon(1e-12));
}

TEST_CASE("spectral norm of a diagonal matrix") {
  Matrix a = Matrix::diagonal({-3.0, 2.0, 0.5});
  CHECK(spectral_norm(a) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("complement basis spans the orthogonal complement") {
  const std::vector<double> unit{0.6, 0.8, 0.0};
  const Matrix q = complement_basis(unit);
  REQUIRE(q.cols() == 2);
  for (int c = 0; c < q.cols(); ++c) {
    double proj = 0.0;
    for (int r = 0; r < 3; ++r) proj += q(r, c) * unit[r];
    CHECK(std::abs(proj) < 1e-12);
  }
}
