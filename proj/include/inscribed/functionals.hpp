#pragma once

// Total edge length L and total facet area S of inscribed parallelepipeds,
// their sharp upper bounds, and the scalar inequalities behind the bounds.

#include <string_view>
#include <utility>

#include "inscribed/geometry.hpp"

namespace inscribed {

enum class FunctionalKind { EdgeLength, FacetArea };

std::string_view to_string(FunctionalKind kind);
/// Accepts "edge"/"edge_length" and "facet"/"facet_area".
FunctionalKind parse_functional(std::string_view s);

struct FunctionalValue {
  double value = 0.0;
  FunctionalKind kind = FunctionalKind::EdgeLength;
  /// max λ / min λ of the sphere orthotope, 1 when not applicable.
  double condition = 1.0;
};

/// diag(UᵀMU)
Vector congruence_diagonal(const OrthoMatrix& u, const Matrix& m);

/// L = 2^{n−1} Σ λ_i √(u_iᵀ A u_i)
FunctionalValue edge_length_total(const Ellipsoid& e, const SphereOrthotope& q);
/// L = 2^{n−1} Σ ‖v_i‖, for any parallelepiped.
FunctionalValue edge_length_total(const Parallelepiped& p);

/// S = 2 Σ_i √det G_{−i,−i}, G = VᵀV, each minor by pivoted elimination.
FunctionalValue facet_area_total_gram(const Parallelepiped& p);
/// S = 2 √det A (Π λ_j) Σ_i √((UᵀCU)_ii) / λ_i
FunctionalValue facet_area_total_factored(const Ellipsoid& e, const SphereOrthotope& q);

/// Evaluates either functional on the sphere data (Gram route for S).
FunctionalValue evaluate(FunctionalKind kind, const Ellipsoid& e, const SphereOrthotope& q);

/// 2ⁿ √tr A
double bound_L_max(const Ellipsoid& e);
/// 2ⁿ n^{−(n−2)/2} √det A √tr A⁻¹
double bound_S_max(const Ellipsoid& e);
double bound(FunctionalKind kind, const Ellipsoid& e);

/// Φ(λ) = (Π λ_j)(Σ λ_i^{−2})^{1/2}. Throws NonPositiveInput.
double phi(std::span<const double> lambda);
/// max of Φ on Σλ² = 4: 2^{n−1} n^{(2−n)/2}
double phi_max(std::size_t n);

/// (Πβ_i)(Σ 1/β_i) for β > 0 with Σβ² = 1; at most n^{(3−n)/2}.
double beta_product_sum(std::span<const double> beta);
double beta_product_sum_bound(std::size_t n);

/// Πx_i − (1/n)Σx_i for x > 0 with (1/n)Σ1/x_i = 1; nonnegative.
double maclaurin_gap(std::span<const double> x);

/// (det A · tr A⁻¹, tr A) for a 2×2 SPD matrix. Throws WrongDimension otherwise.
std::pair<double, double> planar_identity_check(const SpdMatrix& a);

}  // namespace inscribed
