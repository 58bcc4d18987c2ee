#include <doctest.h>

#include <cmath>

#include "inscribed/error.hpp"
#include "inscribed/geometry.hpp"
#include "test_helpers.hpp"

using namespace inscribed;
using namespace testing_support;

namespace {

Ellipsoid ellipsoid(const Matrix& a) { return Ellipsoid(SpdMatrix(SymMatrix(a))); }

}  // namespace

TEST_CASE("ellipsoid caches square root and inverse") {
  Rng rng(1);
  const Ellipsoid e = ellipsoid(random_spd(4, rng));
  const Matrix& a = e.A().matrix();
  CHECK(max_abs_diff(e.B().matrix() * e.B().matrix(), a) < 1e-10 * a.max_abs());
  CHECK(max_abs_diff(e.C().matrix() * a, Matrix::identity(4)) < 1e-10);
  CHECK(max_abs_diff(e.B_inv().matrix() * e.B().matrix(), Matrix::identity(4)) < 1e-10);
}

TEST_CASE("sphere orthotope invariants") {
  CHECK_THROWS_AS(SphereOrthotope(OrthoMatrix::identity(2), Vector{1, 1}), Error);
  try {
    SphereOrthotope(OrthoMatrix::identity(2), Vector{2, 0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveInput);
  }
  try {
    SphereOrthotope(OrthoMatrix::identity(2), Vector{1.5, 1.5});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstraintViolated);
  }
  CHECK_THROWS_AS(SphereOrthotope(OrthoMatrix::identity(3), Vector{std::sqrt(2.0), std::sqrt(2.0)}),
                  Error);
  const SphereOrthotope q(OrthoMatrix::identity(2), Vector{4 / std::sqrt(5.0), 2 / std::sqrt(5.0)});
  CHECK(q.condition() == doctest::Approx(2.0));
}

TEST_CASE("parallelepiped rejects singular edges") {
  CHECK_THROWS_AS(Parallelepiped(Matrix::from_rows({{1, 2}, {2, 4}})), Error);
}

TEST_CASE("cube in the unit ball") {
  const double s = 2.0 / std::sqrt(3.0);
  const Ellipsoid ball = ellipsoid(Matrix::identity(3));
  const SphereOrthotope q(OrthoMatrix::identity(3), Vector{s, s, s});
  const Parallelepiped p = orthotope_to_parallelepiped(ball, q);
  CHECK(max_abs_diff(p.V(), s * Matrix::identity(3)) < 1e-15);
  for (const Vector& x : vertices(p)) CHECK(std::abs(norm(x) - 1.0) < 1e-15);
  const InscribedReport r = is_inscribed(ball, p);
  CHECK(r.inscribed);
  CHECK(r.max_residual <= 1e-12);

  const InscribedReport unit = is_inscribed(ball, Parallelepiped(Matrix::identity(3)));
  CHECK_FALSE(unit.inscribed);
  CHECK(std::abs(unit.max_residual - 0.25) < 1e-15);
}

TEST_CASE("planar maximizer for diag(4,1)") {
  const Ellipsoid e = ellipsoid(Matrix::diagonal(Vector{4, 1}));
  const SphereOrthotope q(OrthoMatrix::identity(2), Vector{4 / std::sqrt(5.0), 2 / std::sqrt(5.0)});
  const Parallelepiped p = orthotope_to_parallelepiped(e, q);
  CHECK(std::abs(p.V()(0, 0) - 8 / std::sqrt(5.0)) < 1e-14);
  CHECK(std::abs(p.V()(1, 1) - 2 / std::sqrt(5.0)) < 1e-14);
  CHECK(std::abs(p.V()(0, 1)) < 1e-15);
  CHECK(is_inscribed(e, p).max_residual < 1e-14);
  const Vector v = all_plus_vertex(p);
  CHECK(std::abs(v[0] - 4 / std::sqrt(5.0)) < 1e-14);
  CHECK(std::abs(v[1] - 1 / std::sqrt(5.0)) < 1e-14);
}

TEST_CASE("vertex enumeration order") {
  const std::vector<Vector> v2 = vertices(Parallelepiped(Matrix::identity(2)));
  REQUIRE(v2.size() == 4);
  CHECK(v2[0] == Vector{-0.5, -0.5});
  CHECK(v2[1] == Vector{-0.5, 0.5});
  CHECK(v2[2] == Vector{0.5, -0.5});
  CHECK(v2[3] == Vector{0.5, 0.5});

  const std::vector<Vector> v1 = vertices(Parallelepiped(Matrix::diagonal(Vector{2})));
  REQUIRE(v1.size() == 2);
  CHECK(v1[0][0] == -1.0);
  CHECK(v1[1][0] == 1.0);

  CHECK(sign_vector(3, 0) == std::vector<int>{-1, -1, -1});
  CHECK(sign_vector(3, 4) == std::vector<int>{1, -1, -1});
  CHECK(all_plus_vertex(Parallelepiped(Matrix::identity(2))) == Vector{0.5, 0.5});

  CHECK_THROWS_AS(vertices(Parallelepiped(Matrix::identity(kMaxVertexDimension + 1))), Error);
}

TEST_CASE("random orthotopes map to inscribed parallelepipeds and back") {
  Rng rng(7);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int k = 0; k < 100; ++k) {
      const Ellipsoid e = ellipsoid(random_spd(n, rng));
      const SphereOrthotope q(random_orthogonal(n, rng), random_lambda(n, rng));
      const Parallelepiped p = orthotope_to_parallelepiped(e, q);
      CHECK(is_inscribed(e, p).max_residual <= 1e-10);

      const SphereOrthotope back = parallelepiped_to_orthotope(e, p);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(back.lambda()[i] - q.lambda()[i]) <= 1e-10);
        // columns agree up to sign
        const double c = dot(back.U().column(i), q.U().column(i));
        CHECK(std::abs(std::abs(c) - 1.0) <= 1e-10);
      }
    }
  }
}

TEST_CASE("classification: non-orthotopes and wrong radius are rejected") {
  const Ellipsoid ball = ellipsoid(Matrix::identity(3));
  try {
    parallelepiped_to_orthotope(ball, Parallelepiped(Matrix::identity(3)));
    FAIL("expected NotInscribed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInscribed);
  }

  const Ellipsoid disc = ellipsoid(Matrix::identity(2));
  const double s = std::sqrt(2.0) / 2.0;
  try {
    parallelepiped_to_orthotope(disc, Parallelepiped(s * Matrix::from_rows({{1, 1}, {0, 1}})));
    FAIL("expected NotOrthotope");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOrthotope);
  }

  // Tilting one edge of an inscribed orthotope moves some vertex off the boundary.
  Rng rng(13);
  for (std::size_t n = 2; n <= 6; ++n) {
    const Ellipsoid e = ellipsoid(random_spd(n, rng));
    const SphereOrthotope q(random_orthogonal(n, rng), random_lambda(n, rng));
    Matrix w = q.U().matrix();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) *= q.lambda()[j];
    const Vector w1 = w.column(1);
    for (std::size_t i = 0; i < n; ++i) w(i, 0) += 1e-3 * w1[i];
    const Parallelepiped p(e.B().matrix() * w);
    CHECK_THROWS_AS(parallelepiped_to_orthotope(e, p), Error);
    CHECK(is_inscribed(e, p).max_residual > 1e-9);
  }
}
