#pragma once

// Diagonal equalization: orthogonal V with diag(VᵀMV) = (tr M / n)·1, either
// unconstrained or inside the stabilizer {V : V·1 = 1}.

#include <cstdint>
#include <string>
#include <vector>

#include "inscribed/linalg.hpp"

namespace inscribed {

struct EqualizationReport {
  OrthoMatrix V = OrthoMatrix::identity(1);
  /// Accepted steps: plane rotations (unconstrained) or descent steps (barycentric).
  std::size_t iterations = 0;
  /// Elementary rotations applied to V in the returned segment.
  std::size_t rotations = 0;
  /// Ψ(V) = Σ_i ((VᵀMV)_ii − tr M / n)², starting value then one entry per accepted step.
  Vector variance_history;
  bool converged = false;
  double final_psi = 0.0;
  /// Entrywise target: max_i |(VᵀMV)_ii − tr M / n| ≤ tol·(1 + |tr M| / n).
  double tol = 0.0;
  double max_diag_residual = 0.0;
  /// Descent segments abandoned because no step decreased Ψ.
  std::size_t restarts = 0;
  /// Accepted barycentric steps by kind.
  std::size_t pairwise_steps = 0;
  std::size_t gauss_newton_steps = 0;
  std::string message;
};

/// Ψ for a symmetric matrix already in the rotated frame.
double diagonal_variance(const Matrix& d);

/// Pinning scheme: at each step rotate the largest and smallest active
/// diagonal entries in their plane so the largest lands on tr M / n, then pin
/// it. Uses at most n − 1 rotations.
EqualizationReport equalize_diagonal(const SymMatrix& m, double tol = 1e-10);

struct RotationTriple {
  std::size_t p = 0;
  std::size_t q = 1;
  std::size_t r = 2;
  double theta = 0.0;
};

/// 3×3 rotation by theta about (1,1,1)/√3, embedded in coordinates (p, q, r).
/// theta = 2π/3 maps e_p → e_q → e_r → e_p. Throws IndexError.
OrthoMatrix rotation_about_ones_axis(std::size_t n, const RotationTriple& triple);

/// Angles θ in [0, 4π/3] where the p-th and q-th diagonal entries of
/// R(θ)ᵀ D R(θ) coincide, located by bisection plus secant polish.
std::vector<double> equalizing_angles(const Matrix& d, std::size_t p, std::size_t q, std::size_t r);

struct BarycentricOptions {
  double tol = 1e-10;
  /// 0 selects 500·n².
  std::size_t max_iter = 0;
  std::uint64_t seed = 0;
  /// A step is accepted only if Ψ drops by at least decrease_floor·Ψ.
  double decrease_floor = 1e-6;
  std::size_t max_restarts = 8;
};

/// Equalizes the diagonal of a symmetric M with M·1 = λ·1 using rotations
/// that each fix some e_p + e_q + e_r, so the returned V satisfies V·1 = 1.
/// Throws DimensionTooSmall (n < 3) and NotRowConstant. Non-convergence is
/// reported through `converged`, with the best V found.
EqualizationReport equalize_diagonal_barycentric(const SymMatrix& m,
                                                 const BarycentricOptions& options = {});

/// Damped Gauss–Newton descent of Ψ(V) for any symmetric M over rotations
/// about e_p + e_q + e_r axes, starting at `start` (which should fix 1). Unlike
/// equalize_diagonal_barycentric there is no row-constancy requirement and no
/// restarts; returns the final V.
OrthoMatrix stabilizer_descent(const SymMatrix& m, const OrthoMatrix& start, double tol,
                               std::size_t max_iter = 200);

/// Throws Error(NotConverged) when the report did not converge.
void require_converged(const EqualizationReport& report);

/// U = W with W·(1/√n) = y0 (Householder), so (1/√n)Σu_i = y0 and every
/// ⟨y0, u_i⟩ = 1/√n.
OrthoMatrix barycentric_basis(const UnitVector& y0);

struct RestrictedSchurHornResult {
  OrthoMatrix U = OrthoMatrix::identity(1);
  /// ‖diag(UᵀAU) − tr(A)·z⊙z‖₂ with z = Uᵀy0
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// ‖diag(UᵀAU) − tr(A)·z⊙z‖₂, z = Uᵀy0.
double restricted_schur_horn_residual(const Matrix& a, const UnitVector& y0, const Matrix& u);

/// Levenberg–Marquardt over plane rotations of U, starting at `start`, for
/// diag(UᵀAU) = tr(A)·z⊙z. Stops once the residual is ≤ tol·(1 + tr A) or no
/// damped step decreases it.
RestrictedSchurHornResult solve_restricted_schur_horn(const SymMatrix& a, const UnitVector& y0,
                                                      const OrthoMatrix& start, double tol,
                                                      std::size_t max_iter = 200);

}  // namespace inscribed
