#pragma once

// Extremal inscribed parallelepipeds: global maximizers of L and S, and the
// vertex-constrained maximizers for the planar, ball and eigenvector cases.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "inscribed/equalizer.hpp"
#include "inscribed/functionals.hpp"

namespace inscribed {

struct ExtremalCertificate {
  FunctionalValue achieved;
  double bound = 0.0;
  /// (bound − achieved) / bound
  double relative_gap = 0.0;
  /// Keys: "diagonal_equalization", "lambda_proportionality", "vertex", "inscribed",
  /// present when they apply to the route.
  std::map<std::string, double> equality_residuals;
  std::string route;
};

struct Construction {
  SphereOrthotope orthotope;
  Parallelepiped parallelepiped;
  ExtremalCertificate certificate;
};

/// Default tolerance for a vertex lying on ∂E: |x0ᵀCx0 − 1|.
inline constexpr double kBoundaryTol = 1e-10;
/// ‖Cy − (yᵀCy)y‖ ≤ kEigenvectorTol·‖C‖ routes y to the eigenvector constructors.
inline constexpr double kEigenvectorTol = 1e-8;

/// λ_i = 2√(u_iᵀAu_i)/√tr A for the given frame, or a seeded Haar frame.
Construction construct_L_max(const Ellipsoid& e, const std::optional<OrthoMatrix>& u = std::nullopt,
                             std::uint64_t seed = 0);

/// Equal λ = 2/√n on a frame that equalizes diag(UᵀCU).
Construction construct_S_max(const Ellipsoid& e);

struct VertexFrame {
  OrthoMatrix U;
  Vector lambda;
};

/// Flips column signs so every λ_i = 2⟨u_i, y0⟩ is positive; then ½Σλ_i u_i = y0.
/// Throws DegenerateVertex when some |⟨u_i, y0⟩| < 1e-12.
VertexFrame vertex_lambdas(const OrthoMatrix& u, const UnitVector& y0);

/// y0 = B⁻¹x0 after checking |x0ᵀCx0 − 1| ≤ tol (NotOnBoundary).
UnitVector boundary_direction(const Ellipsoid& e, std::span<const double> x0,
                              double tol = kBoundaryTol);

/// Planar frame U(θ) = [(cosθ, sinθ), (−sinθ, cosθ)] seen from y0 = (cosψ, sinψ).
/// The maximizing frame has z = Uᵀy0 proportional to (√g11, √g22), i.e.
/// tan φ = √(g22/g11); F below vanishes exactly there.
struct PlanarSearchState {
  double theta = 0.0;
  /// angle of z = Uᵀy0, equal to ψ − θ
  double phi = 0.0;
  double g11 = 0.0;
  double g22 = 0.0;
  /// arctan√(g22/g11) − φ
  double F = 0.0;
};

PlanarSearchState planar_search_state(const Matrix& a, double psi, double theta);

/// n = 2: the parallelogram through x0 with perimeter 4√tr A (its facet
/// measure is the perimeter as well). Throws NotOnBoundary, WrongDimension.
Construction construct_vertex_2d(const Ellipsoid& e, std::span<const double> x0,
                                 FunctionalKind kind = FunctionalKind::FacetArea,
                                 double boundary_tol = kBoundaryTol);

/// Ball A = c·I, n ≥ 2: barycentric frame through y0 with λ = 2/√n.
Construction construct_vertex_ball(const Ellipsoid& e, std::span<const double> x0, FunctionalKind kind,
                                   double boundary_tol = kBoundaryTol);

struct VertexOptions {
  double tol = 1e-10;
  std::uint64_t seed = 0;
  double boundary_tol = kBoundaryTol;
};

/// n ≥ 3, y0 an eigenvector of C: barycentric frame through y0 whose
/// diag(UᵀCU) is equalized inside the stabilizer of 1. Throws NotEigenvector,
/// NotConverged.
Construction construct_vertex_eigen_S(const Ellipsoid& e, std::span<const double> x0,
                                      const VertexOptions& options = {});

/// n ≥ 3, y0 an eigenvector of A: frame with diag(UᵀAU) = tr(A)·z⊙z, z = Uᵀy0.
/// Tries the barycentric equalizer first and falls back to a direct
/// Levenberg–Marquardt solve over plane rotations when it does not converge.
/// Throws NotEigenvector, NotConverged.
Construction construct_vertex_eigen_L(const Ellipsoid& e, std::span<const double> x0,
                                      const VertexOptions& options = {});

/// Routes to the planar, ball or eigenvector constructor; any other vertex
/// throws UnsupportedCase.
Construction construct_through_vertex(const Ellipsoid& e, std::span<const double> x0,
                                      FunctionalKind kind, const VertexOptions& options = {});

/// True when ‖Cy − (yᵀCy)y‖ ≤ kEigenvectorTol·‖C‖_max.
bool is_eigenvector(const SpdMatrix& c, const UnitVector& y);

}  // namespace inscribed
