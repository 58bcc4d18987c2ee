#include <doctest.h>

#include <cmath>
#include <numbers>

#include "inscribed/equalizer.hpp"
#include "inscribed/error.hpp"
#include "test_helpers.hpp"

using namespace inscribed;
using namespace testing_support;

namespace {

Matrix congruence(const Matrix& m, const OrthoMatrix& v) { return v.matrix().transposed() * m * v.matrix(); }

double max_dev_from_mean(const Matrix& d) {
  const double t = d.trace() / static_cast<double>(d.rows());
  double m = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) m = std::max(m, std::abs(d(i, i) - t));
  return m;
}

double ones_residual(const OrthoMatrix& v) {
  const Vector r = v.matrix() * Vector(v.n(), 1.0);
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x - 1.0));
  return m;
}

}  // namespace

TEST_CASE("unconstrained equalizer on small examples") {
  const EqualizationReport r = equalize_diagonal(SymMatrix(Matrix::diagonal(Vector{1, 3})));
  CHECK(r.converged);
  CHECK(r.rotations == 1);
  CHECK(std::abs(std::abs(r.V(0, 0)) - std::sqrt(0.5)) < 1e-14);
  const Matrix d = congruence(Matrix::diagonal(Vector{1, 3}), r.V);
  CHECK(std::abs(d(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(d(1, 1) - 2.0) < 1e-14);

  const Matrix flat = Matrix::from_rows({{2, 1, 0}, {1, 2, 1}, {0, 1, 2}});
  const EqualizationReport id = equalize_diagonal(SymMatrix(flat));
  CHECK(id.rotations == 0);
  CHECK(max_abs_diff(id.V.matrix(), Matrix::identity(3)) == 0.0);

  const Matrix m = Matrix::diagonal(Vector{1, 2, 3});
  const EqualizationReport r3 = equalize_diagonal(SymMatrix(m));
  const Matrix d3 = congruence(m, r3.V);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(d3(i, i) - 2.0) <= 1e-12);
}

TEST_CASE("unconstrained equalizer properties on random input") {
  Rng rng(61);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int k = 0; k < 30; ++k) {
      const Matrix m = random_symmetric(n, rng);
      const EqualizationReport r = equalize_diagonal(SymMatrix(m));
      CHECK(r.converged);
      CHECK(r.rotations <= n - 1);
      const Matrix d = congruence(m, r.V);
      CHECK(max_dev_from_mean(d) <= 1e-10 * (1.0 + std::abs(m.trace()) / n));
      CHECK(std::abs(d.trace() - m.trace()) <= 1e-12 * std::max(1.0, m.frobenius()));
      CHECK(std::abs(d.frobenius() - m.frobenius()) <= 1e-10 * m.frobenius());
    }
  }
}

TEST_CASE("rotation about the ones axis") {
  CHECK(max_abs_diff(rotation_about_ones_axis(4, {0, 1, 2, 0.0}).matrix(), Matrix::identity(4)) < 1e-15);

  const OrthoMatrix cyc = rotation_about_ones_axis(4, {0, 2, 3, 2.0 * std::numbers::pi / 3.0});
  // e_0 → e_2 → e_3 → e_0, e_1 fixed
  CHECK(std::abs(cyc(2, 0) - 1.0) < 1e-15);
  CHECK(std::abs(cyc(3, 2) - 1.0) < 1e-15);
  CHECK(std::abs(cyc(0, 3) - 1.0) < 1e-15);
  CHECK(cyc(1, 1) == 1.0);

  Rng rng(67);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < 50; ++k) {
    const OrthoMatrix r = rotation_about_ones_axis(6, {1, 4, 5, angle(rng)});
    CHECK(ones_residual(r) < 1e-15);
    CHECK(orthogonality_defect(r.matrix()) < 1e-15);
    CHECK(r(0, 0) == 1.0);
    CHECK(r(2, 2) == 1.0);
    CHECK(r(1, 2) == 0.0);
  }
  CHECK_THROWS_AS(rotation_about_ones_axis(3, {0, 1, 3, 0.1}), Error);
  CHECK_THROWS_AS(rotation_about_ones_axis(3, {0, 1, 1, 0.1}), Error);
}

TEST_CASE("equalizing angles bracket a root whenever the pair differs") {
  Rng rng(71);
  for (int k = 0; k < 200; ++k) {
    const Matrix d = random_symmetric(5, rng);
    const std::vector<double> roots = equalizing_angles(d, 0, 3, 4);
    if (std::abs(d(0, 0) - d(3, 3)) < 1e-12) continue;
    REQUIRE_FALSE(roots.empty());
    for (double t : roots) {
      CHECK(t >= 0.0);
      CHECK(t <= 4.0 * std::numbers::pi / 3.0 + 1e-12);
      const Matrix r = congruence(d, rotation_about_ones_axis(5, {0, 3, 4, t}));
      CHECK(std::abs(r(0, 0) - r(3, 3)) <= 1e-10 * d.max_abs());
    }
  }
}

TEST_CASE("barycentric equalizer preconditions") {
  const Matrix flat = Matrix::from_rows({{2, 1, 1}, {1, 2, 1}, {1, 1, 2}});
  const EqualizationReport r = equalize_diagonal_barycentric(SymMatrix(flat));
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(max_abs_diff(r.V.matrix(), Matrix::identity(3)) == 0.0);

  try {
    equalize_diagonal_barycentric(SymMatrix(Matrix::from_rows({{2, 1}, {1, 2}})));
    FAIL("expected DimensionTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionTooSmall);
    CHECK(std::string(e.what()).find("requires n >= 3") != std::string::npos);
  }
  try {
    equalize_diagonal_barycentric(SymMatrix(Matrix::diagonal(Vector{1, 2, 3})));
    FAIL("expected NotRowConstant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotRowConstant);
  }
}

// For n = 3 the diagonal variance is the same at every V with V·1 = 1, so a
// non-constant diagonal can never be equalized inside the stabilizer.
TEST_CASE("three-dimensional stabilizer cannot change the diagonal variance") {
  const Matrix m = Matrix::from_rows({{3, 0, 1}, {0, 2, 2}, {1, 2, 1}});
  CHECK(diagonal_variance(m) == doctest::Approx(2.0));

  Rng rng(73);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < 100; ++k) {
    OrthoMatrix v = rotation_about_ones_axis(3, {0, 1, 2, angle(rng)});
    // the only other stabilizer elements are these rotations composed with a transposition
    if (k % 2 == 1) v = OrthoMatrix(Matrix::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}})) * v;
    CHECK(std::abs(diagonal_variance(congruence(m, v)) - 2.0) < 1e-12);
  }

  BarycentricOptions o;
  o.max_restarts = 2;
  const EqualizationReport r = equalize_diagonal_barycentric(SymMatrix(m), o);
  CHECK_FALSE(r.converged);
  CHECK(std::abs(r.final_psi - 2.0) < 1e-12);
  CHECK(ones_residual(r.V) <= 1e-12);
  CHECK_THROWS_AS(require_converged(r), Error);
}

TEST_CASE("barycentric equalizer converges for n = 4, 6, 8") {
  Rng rng(79);
  for (std::size_t n : {4u, 6u, 8u}) {
    for (int k = 0; k < 20; ++k) {
      const Matrix m = random_row_constant(n, rng);
      BarycentricOptions o;
      o.seed = static_cast<std::uint64_t>(k);
      const EqualizationReport r = equalize_diagonal_barycentric(SymMatrix(m), o);
      CHECK(r.converged);
      CHECK(ones_residual(r.V) <= 1e-12);
      CHECK(orthogonality_defect(r.V.matrix()) <= 1e-10);
      const Matrix d = congruence(m, r.V);
      CHECK(max_dev_from_mean(d) <= 1e-10 * (1.0 + std::abs(m.trace()) / n));
      for (std::size_t h = 1; h < r.variance_history.size(); ++h)
        CHECK(r.variance_history[h] < r.variance_history[h - 1]);
      CHECK(r.variance_history.size() == r.iterations + 1);
    }
  }
}

TEST_CASE("barycentric equalizer is deterministic per seed") {
  Rng rng(83);
  const Matrix m = random_row_constant(6, rng);
  BarycentricOptions o;
  o.seed = 5;
  const EqualizationReport a = equalize_diagonal_barycentric(SymMatrix(m), o);
  const EqualizationReport b = equalize_diagonal_barycentric(SymMatrix(m), o);
  CHECK(max_abs_diff(a.V.matrix(), b.V.matrix()) == 0.0);
  CHECK(a.variance_history == b.variance_history);
}

TEST_CASE("barycentric basis") {
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(max_abs_diff(barycentric_basis(UnitVector(Vector{s, s, s})).matrix(), Matrix::identity(3)) < 1e-15);

  Rng rng(89);
  for (std::size_t n : {3u, 5u, 8u}) {
    for (int k = 0; k < 20; ++k) {
      const UnitVector y0(n == 3 && k == 0 ? Vector{1, 0, 0} : random_unit(n, rng));
      const OrthoMatrix u = barycentric_basis(y0);
      const Vector sum = u.matrix() * Vector(n, 1.0 / std::sqrt(static_cast<double>(n)));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(sum[i] - y0[i]) <= 1e-12);
        CHECK(std::abs(dot(u.column(i), y0.coords()) - 1.0 / std::sqrt(static_cast<double>(n))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("restricted diagonal condition solved for an eigenvector direction") {
  const SymMatrix a(Matrix::diagonal(Vector{1, 2, 3}));
  const UnitVector y0(Vector{0, 0, 1});
  const OrthoMatrix start = barycentric_basis(y0);
  CHECK(restricted_schur_horn_residual(a.matrix(), y0, start.matrix()) > 0.1);
  const RestrictedSchurHornResult r = solve_restricted_schur_horn(a, y0, start, 1e-14);
  CHECK(r.residual <= 1e-12);
  CHECK(orthogonality_defect(r.U.matrix()) <= 1e-12);
}

TEST_CASE("stabilizer descent keeps the ones vector fixed") {
  Rng rng(97);
  const Matrix m = random_row_constant(6, rng);
  const OrthoMatrix v = stabilizer_descent(SymMatrix(m), OrthoMatrix::identity(6), 1e-12);
  CHECK(ones_residual(v) <= 1e-12);
  CHECK(max_dev_from_mean(congruence(m, v)) < max_dev_from_mean(m));
}
