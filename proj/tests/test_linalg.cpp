#include <doctest.h>

#include <cmath>
#include <string>

#include "inscribed/error.hpp"
#include "inscribed/linalg.hpp"
#include "test_helpers.hpp"

using namespace inscribed;
using namespace testing_support;

namespace {

// Laplace expansion along the first row; independent of the LU routine.
double cofactor_det(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  double det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, mc = 0; c < n; ++c)
        if (c != j) minor(r - 1, mc++) = a(r, c);
    det += (j % 2 == 0 ? 1.0 : -1.0) * a(0, j) * cofactor_det(minor);
  }
  return det;
}

}  // namespace

TEST_CASE("eigh of diagonal and 2x2 inputs") {
  const Eigh d = eigh(SymMatrix(Matrix::diagonal(Vector{3, 1, 2})));
  CHECK(d.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.values[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.values[2] == doctest::Approx(3.0).epsilon(1e-14));

  const Eigh e = eigh(SymMatrix(Matrix::from_rows({{2, 1}, {1, 2}})));
  CHECK(std::abs(e.values[0] - 1.0) < 1e-14);
  CHECK(std::abs(e.values[1] - 3.0) < 1e-14);
}

TEST_CASE("eigh reconstructs random symmetric matrices") {
  Rng rng(11);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int k = 0; k < 10; ++k) {
      const Matrix s = random_symmetric(n, rng);
      const Eigh e = eigh(SymMatrix(s));
      const Matrix& q = e.vectors.matrix();
      const Matrix rec = q * Matrix::diagonal(e.values) * q.transposed();
      CHECK(max_abs_diff(rec, s) <= 1e-10 * s.max_abs());
      CHECK(orthogonality_defect(q) <= 1e-12);
      for (std::size_t i = 1; i < n; ++i) CHECK(e.values[i - 1] <= e.values[i]);
      double sum = 0.0;
      for (double v : e.values) sum += v;
      CHECK(std::abs(sum - s.trace()) <= 1e-10 * std::max(1.0, std::abs(s.trace())));
    }
  }
}

TEST_CASE("SymMatrix validation and symmetrization") {
  const Matrix ns = Matrix::from_rows({{1, 2}, {0, 1}});
  try {
    (void)SymMatrix::checked(ns);
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSymmetric);
    CHECK(std::string(e.what()).find("not symmetric") != std::string::npos);
  }
  const SymMatrix s(ns);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == 1.0);
}

TEST_CASE("SpdMatrix rejects indefinite input") {
  CHECK_THROWS_AS(SpdMatrix(SymMatrix(Matrix::diagonal(Vector{1, -1}))), Error);
  try {
    SpdMatrix(SymMatrix(Matrix::diagonal(Vector{1, 0})));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
  }
}

TEST_CASE("spd_sqrt and spd_inverse") {
  const SpdMatrix id(SymMatrix(Matrix::identity(3)));
  CHECK(max_abs_diff(spd_sqrt(id).matrix(), Matrix::identity(3)) < 1e-15);
  CHECK(max_abs_diff(spd_inverse(id).matrix(), Matrix::identity(3)) < 1e-15);

  const SpdMatrix d(SymMatrix(Matrix::diagonal(Vector{4, 9})));
  CHECK(max_abs_diff(spd_sqrt(d).matrix(), Matrix::diagonal(Vector{2, 3})) < 1e-14);
  const SpdMatrix d2(SymMatrix(Matrix::diagonal(Vector{4, 1})));
  CHECK(max_abs_diff(spd_inverse(d2).matrix(), Matrix::diagonal(Vector{0.25, 1})) < 1e-15);

  Rng rng(5);
  for (std::size_t n = 1; n <= 10; ++n) {
    const SpdMatrix a{SymMatrix(random_spd(n, rng))};
    const SpdMatrix b = spd_sqrt(a);
    CHECK(max_abs_diff(b.matrix() * b.matrix(), a.matrix()) <= 1e-10 * a.matrix().max_abs());
    const SpdMatrix c = spd_inverse(a);
    const double cond = a.eigenvalues().back() / a.eigenvalues().front();
    CHECK(max_abs_diff(c.matrix() * a.matrix(), Matrix::identity(n)) <= 1e-10 * cond);

    // fourth power of the quarter root
    const Matrix r = spd_sqrt(b).matrix();
    const Matrix r4 = r * r * r * r;
    CHECK(max_abs_diff(r4, a.matrix()) <= 1e-8 * a.matrix().max_abs());
  }
}

TEST_CASE("householder_to maps a onto b") {
  const UnitVector a(Vector{1, 0, 0});
  const UnitVector b(Vector{0, 1, 0});
  const OrthoMatrix w = householder_to(a, b);
  const Vector wa = w.matrix() * a.coords();
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(wa[i] - b[i]) < 1e-15);
  CHECK(orthogonality_defect(w.matrix()) < 1e-15);

  CHECK(max_abs_diff(householder_to(a, a).matrix(), Matrix::identity(3)) == 0.0);

  Rng rng(3);
  for (std::size_t n = 1; n <= 9; ++n) {
    for (int k = 0; k < 20; ++k) {
      const UnitVector x(random_unit(n, rng));
      const UnitVector y(random_unit(n, rng));
      const Vector wx = householder_to(x, y).matrix() * x.coords();
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err += (wx[i] - y[i]) * (wx[i] - y[i]);
      CHECK(std::sqrt(err) <= 1e-12);
    }
  }
}

TEST_CASE("OrthoMatrix and UnitVector validation") {
  CHECK_THROWS_AS(OrthoMatrix(Matrix::from_rows({{1, 0.1}, {0, 1}})), Error);
  CHECK_THROWS_AS(UnitVector(Vector{1, 1}), Error);
  try {
    UnitVector(Vector{0.5});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotUnit);
  }
  const UnitVector u = UnitVector::normalized(Vector{3, 4});
  CHECK(std::abs(u[0] - 0.6) < 1e-15);
  CHECK_THROWS_AS(UnitVector::normalized(Vector{0, 0}), Error);
}

TEST_CASE("determinant against cofactor expansion and solve residual") {
  Rng rng(17);
  for (std::size_t n = 1; n <= 6; ++n) {
    const Matrix a = random_symmetric(n, rng) + Matrix::identity(n);
    const double ref = cofactor_det(a);
    CHECK(std::abs(determinant(a) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    const Vector b = random_unit(n, rng);
    const Vector x = solve_linear(a, b);
    const Vector ax = a * x;
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ax[i] - b[i]) < 1e-9);
  }
  CHECK_THROWS_AS(solve_linear(Matrix(2, 2), Vector{1, 1}), Error);
}

TEST_CASE("plane rotation helpers agree with explicit multiplication") {
  Rng rng(23);
  const std::size_t n = 5;
  const Matrix m = random_symmetric(n, rng);
  const double th = 0.37;
  Matrix g = Matrix::identity(n);
  g(1, 1) = std::cos(th);
  g(3, 1) = std::sin(th);
  g(1, 3) = -std::sin(th);
  g(3, 3) = std::cos(th);
  Matrix u = m;
  rotate_columns(u, 1, 3, std::cos(th), std::sin(th));
  CHECK(max_abs_diff(u, m * g) < 1e-14);
  Matrix d = m;
  rotate_congruence(d, 1, 3, std::cos(th), std::sin(th));
  CHECK(max_abs_diff(d, g.transposed() * m * g) < 1e-13);
}

TEST_CASE("random_orthogonal determinism and Haar diagonal mean") {
  const OrthoMatrix one = random_orthogonal(1, 99);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) < 1e-15);
  CHECK(max_abs_diff(random_orthogonal(3, 7).matrix(), random_orthogonal(3, 7).matrix()) == 0.0);
  CHECK(max_abs_diff(random_orthogonal(3, 7).matrix(), random_orthogonal(3, 8).matrix()) > 0.0);

  // E[(UᵀMU)_ii] = tr M / n under Haar measure.
  const std::size_t n = 4;
  const Matrix m = Matrix::from_rows({{4, 1, 0, 0}, {1, 3, 0.5, 0}, {0, 0.5, 2, 0}, {0, 0, 0, 1}});
  const std::size_t samples = 10000;
  Vector sum(n, 0.0);
  Vector sum_sq(n, 0.0);
  Rng rng(stream_seed(2024, 0));
  for (std::size_t s = 0; s < samples; ++s) {
    const Matrix u = random_orthogonal(n, rng).matrix();
    const Matrix d = u.transposed() * m * u;
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += d(i, i);
      sum_sq[i] += d(i, i) * d(i, i);
    }
  }
  const double target = m.trace() / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = sum[i] / samples;
    const double var = sum_sq[i] / samples - mean * mean;
    const double se = std::sqrt(var / samples);
    CHECK(std::abs(mean - target) <= 3.0 * se);
  }
}

TEST_CASE("stream_seed separates streams") {
  CHECK(stream_seed(1, 0) != stream_seed(1, 1));
  CHECK(stream_seed(1, 0) != stream_seed(2, 0));
  CHECK(stream_seed(5, 9) == stream_seed(5, 9));
}

TEST_CASE("orthonormalize_columns yields an orthonormal frame") {
  Rng rng(31);
  const Matrix a = random_symmetric(6, rng) + 4.0 * Matrix::identity(6);
  CHECK(orthogonality_defect(orthonormalize_columns(a)) < 1e-14);
}
