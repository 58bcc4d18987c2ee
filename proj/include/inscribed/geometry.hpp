#pragma once

// Ellipsoids E = {x : xᵀA⁻¹x = 1}, centered parallelepipeds, and the reduction
// P = B·Q between parallelepipeds inscribed in E and orthotopes inscribed in
// the unit sphere (B = A^{1/2}).

#include <cstddef>
#include <vector>

#include "inscribed/linalg.hpp"

namespace inscribed {

class Ellipsoid {
 public:
  explicit Ellipsoid(SpdMatrix a);

  std::size_t n() const noexcept { return a_.n(); }
  const SpdMatrix& A() const noexcept { return a_; }
  /// A^{1/2}
  const SpdMatrix& B() const noexcept { return b_; }
  /// A⁻¹
  const SpdMatrix& C() const noexcept { return c_; }
  /// A^{-1/2}
  const SpdMatrix& B_inv() const noexcept { return b_inv_; }

  /// xᵀ C x
  double quadratic_form(std::span<const double> x) const;

 private:
  SpdMatrix a_;
  SpdMatrix b_;
  SpdMatrix c_;
  SpdMatrix b_inv_;
};

/// Orthonormal frame U and edge lengths λ with Σλ² = 4: an orthotope
/// inscribed in the unit sphere.
class SphereOrthotope {
 public:
  /// Throws NonPositiveInput (some λ_i ≤ 0), ConstraintViolated (|Σλ² − 4| > 1e-10)
  /// or DimensionMismatch.
  SphereOrthotope(OrthoMatrix u, Vector lambda);

  std::size_t n() const noexcept { return lambda_.size(); }
  const OrthoMatrix& U() const noexcept { return u_; }
  const Vector& lambda() const noexcept { return lambda_; }
  /// max λ / min λ
  double condition() const;

 private:
  OrthoMatrix u_;
  Vector lambda_;
};

/// Centered parallelepiped with edge vectors stored as the columns of V.
class Parallelepiped {
 public:
  /// Throws Degenerate when |det V| ≤ 1e-12·‖V‖_maxⁿ.
  explicit Parallelepiped(Matrix v);

  std::size_t n() const noexcept { return v_.rows(); }
  const Matrix& V() const noexcept { return v_; }
  Vector edge(std::size_t i) const { return v_.column(i); }
  Matrix gram() const { return v_.transposed() * v_; }

 private:
  Matrix v_;
};

struct InscribedReport {
  bool inscribed = false;
  double max_residual = 0.0;
};

inline constexpr std::size_t kMaxVertexDimension = 20;

Parallelepiped orthotope_to_parallelepiped(const Ellipsoid& e, const SphereOrthotope& q);

/// Inverse of orthotope_to_parallelepiped. With W = B⁻¹V, throws NotOrthotope
/// when some |⟨w_i, w_j⟩| > tol and NotInscribed when |Σ‖w_i‖² − 4| > tol.
SphereOrthotope parallelepiped_to_orthotope(const Ellipsoid& e, const Parallelepiped& p,
                                            double tol = 1e-9);

/// Sign vector of vertex k in lexicographic order: −1 before +1, index 0 most
/// significant.
std::vector<int> sign_vector(std::size_t n, std::size_t k);

/// All 2ⁿ vertices ½Σε_i v_i in lexicographic sign order. n ≤ 20.
std::vector<Vector> vertices(const Parallelepiped& p);

InscribedReport is_inscribed(const Ellipsoid& e, const Parallelepiped& p, double tol = 1e-9);

/// ½Σ v_i
Vector all_plus_vertex(const Parallelepiped& p);

}  // namespace inscribed
