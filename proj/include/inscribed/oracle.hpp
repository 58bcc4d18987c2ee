#pragma once

// Randomized checks against the closed-form bounds, a numerical explorer for
// frames satisfying the restricted diagonal condition through a vertex,
// finite-difference stationarity, and a tangent-normal diagnostic.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "inscribed/constructors.hpp"

namespace inscribed {

struct SearchOptions {
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  /// A trial violates the bound when value > bound·(1 + slack).
  double slack = 1e-9;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Keep every trial value in SearchReport::trace (NaN for skipped draws).
  bool record_trace = false;
  double boundary_tol = kBoundaryTol;
};

struct SearchReport {
  FunctionalKind kind = FunctionalKind::EdgeLength;
  std::size_t trials = 0;
  /// Draws skipped because some ⟨u_i, y0⟩ vanished or a Gram minor was singular.
  std::size_t skipped = 0;
  double best_value = 0.0;
  double bound = 0.0;
  /// (bound − best) / bound
  double best_gap = 1.0;
  std::size_t best_trial = 0;
  std::optional<SphereOrthotope> best_config;
  std::size_t violations = 0;
  double worst_excess = 0.0;
  std::vector<double> trace;
};

/// Haar U and λ = 2g/‖g‖ with g entrywise |N(0,1)| per trial.
SearchReport random_search_global(const Ellipsoid& e, FunctionalKind kind,
                                  const SearchOptions& options);

/// Haar U per trial with λ from vertex_lambdas, so every sample passes through x0.
/// Throws NotOnBoundary.
SearchReport random_search_vertex(const Ellipsoid& e, std::span<const double> x0,
                                  FunctionalKind kind, const SearchOptions& options);

struct RshOptions {
  std::size_t restarts = 4;
  std::size_t iters = 2000;
  std::uint64_t seed = 0;
  /// Finish the best frame with a damped Gauss–Newton solve.
  bool polish = true;
};

struct RshReport {
  FunctionalKind target = FunctionalKind::EdgeLength;
  double residual = 0.0;
  OrthoMatrix U = OrthoMatrix::identity(1);
  std::size_t restarts = 0;
  std::size_t best_restart = 0;
  /// residual of the best frame before polishing
  double descent_residual = 0.0;
};

/// edge: ‖diag(UᵀAU) − tr(A)·z⊙z‖₂ with z = Uᵀy0 over all frames.
/// facet: ‖diag(UᵀCU) − (tr C/n)·1‖₂ over frames with Uᵀy0 = 1/√n·1.
double rsh_residual(const Ellipsoid& e, const UnitVector& y0, FunctionalKind target,
                    const OrthoMatrix& u);

/// Random local descent with annealed rotation angles and restarts; no claim of
/// global optimality.
RshReport explore_restricted_schur_horn(const Ellipsoid& e, const UnitVector& y0,
                                        FunctionalKind target, const RshOptions& options);

struct StationarityReport {
  /// max |dF| over plane rotations of the frame
  double frame = 0.0;
  /// max |dF| over unit directions tangent to Σλ² = 4
  double lambda = 0.0;
  double max = 0.0;
};

StationarityReport stationarity_check(const Ellipsoid& e, const SphereOrthotope& q,
                                      FunctionalKind kind, double h = 1e-5);

struct TangentNormals {
  std::vector<Vector> vertices;
  /// C·x/‖C·x‖ at each vertex
  std::vector<Vector> normals;
  /// pairwise inner products of the normals
  Matrix gram;
};

/// Diagnostic only. Throws NotInscribed (tolerance 1e-9) and DimensionTooLarge.
TangentNormals tangent_normals_dump(const Ellipsoid& e, const Parallelepiped& p);

}  // namespace inscribed
