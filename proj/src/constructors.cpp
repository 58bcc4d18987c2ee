#include "inscribed/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inscribed/error.hpp"

namespace inscribed {

namespace {

double max_abs_deviation(std::span<const double> v, double target) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - target));
  return m;
}

struct FinishInput {
  OrthoMatrix u;
  Vector lambda;
  FunctionalKind kind;
  std::string route;
  const Vector* x0 = nullptr;
};

Construction finish(const Ellipsoid& e, FinishInput in) {
  const std::size_t n = e.n();
  // λ is already on the radius-2 sphere up to round-off; remove the round-off.
  const double scale = 2.0 / norm(in.lambda);
  for (double& l : in.lambda) l *= scale;

  SphereOrthotope q(std::move(in.u), std::move(in.lambda));
  Parallelepiped p = orthotope_to_parallelepiped(e, q);

  ExtremalCertificate cert;
  cert.route = std::move(in.route);
  cert.achieved = evaluate(in.kind, e, q);
  cert.bound = bound(in.kind, e);
  cert.relative_gap = (cert.bound - cert.achieved.value) / cert.bound;

  const double nd = static_cast<double>(n);
  if (in.kind == FunctionalKind::EdgeLength) {
    const Vector g = congruence_diagonal(q.U(), e.A().matrix());
    const double tr = e.A().matrix().trace();
    double prop = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      prop = std::max(prop, std::abs(q.lambda()[i] - 2.0 * std::sqrt(g[i] / tr)));
      const double z = 0.5 * q.lambda()[i];
      diag = std::max(diag, std::abs(g[i] - tr * z * z));
    }
    cert.equality_residuals["lambda_proportionality"] = prop;
    if (in.x0 != nullptr) cert.equality_residuals["diagonal_equalization"] = diag;
  } else {
    const Vector c = congruence_diagonal(q.U(), e.C().matrix());
    cert.equality_residuals["lambda_proportionality"] =
        max_abs_deviation(q.lambda(), 2.0 / std::sqrt(nd));
    cert.equality_residuals["diagonal_equalization"] =
        max_abs_deviation(c, e.C().matrix().trace() / nd);
  }
  if (in.x0 != nullptr) {
    const Vector v = all_plus_vertex(p);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += (v[i] - (*in.x0)[i]) * (v[i] - (*in.x0)[i]);
    cert.equality_residuals["vertex"] = std::sqrt(d);
  }
  if (n <= kMaxVertexDimension) {
    cert.equality_residuals["inscribed"] = is_inscribed(e, p).max_residual;
  }
  return Construction{std::move(q), std::move(p), std::move(cert)};
}

void require_dimension_at_least(const Ellipsoid& e, std::size_t n, const char* what) {
  if (e.n() < n) {
    std::ostringstream os;
    os << what << " requires n >= " << n << ", got n = " << e.n();
    throw Error(ErrorKind::DimensionTooSmall, os.str());
  }
}

}  // namespace

Construction construct_L_max(const Ellipsoid& e, const std::optional<OrthoMatrix>& u,
                             std::uint64_t seed) {
  const std::size_t n = e.n();
  OrthoMatrix frame = u ? *u : random_orthogonal(n, seed);
  if (frame.n() != n) throw Error(ErrorKind::DimensionMismatch, "frame vs ellipsoid");
  const Vector g = congruence_diagonal(frame, e.A().matrix());
  const double tr = e.A().matrix().trace();
  Vector lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = 2.0 * std::sqrt(g[i] / tr);
  return finish(e, {std::move(frame), std::move(lambda), FunctionalKind::EdgeLength, "global_edge_length"});
}

Construction construct_S_max(const Ellipsoid& e) {
  const std::size_t n = e.n();
  const SpdMatrix& c = e.C();
  const EqualizationReport eq = equalize_diagonal(SymMatrix(Matrix::diagonal(c.eigenvalues())));
  require_converged(eq);
  OrthoMatrix u = c.eigenvectors() * eq.V;
  Vector lambda(n, 2.0 / std::sqrt(static_cast<double>(n)));
  return finish(e, {std::move(u), std::move(lambda), FunctionalKind::FacetArea, "global_facet_area"});
}

VertexFrame vertex_lambdas(const OrthoMatrix& u, const UnitVector& y0) {
  const std::size_t n = u.n();
  if (y0.n() != n) throw Error(ErrorKind::DimensionMismatch, "frame vs vertex direction");
  Matrix m = u.matrix();
  Vector lambda(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double beta = dot(m.column(i), y0.coords());
    if (std::abs(beta) < 1e-12) {
      std::ostringstream os;
      os << "edge " << i << " is orthogonal to the vertex direction (<u_i, y0> = " << beta << ")";
      throw Error(ErrorKind::DegenerateVertex, os.str());
    }
    if (beta < 0.0) {
      for (std::size_t r = 0; r < n; ++r) m(r, i) = -m(r, i);
    }
    lambda[i] = 2.0 * std::abs(beta);
  }
  return {OrthoMatrix(std::move(m)), std::move(lambda)};
}

UnitVector boundary_direction(const Ellipsoid& e, std::span<const double> x0, double tol) {
  if (x0.size() != e.n()) throw Error(ErrorKind::DimensionMismatch, "vertex vs ellipsoid");
  const double q = e.quadratic_form(x0);
  if (!(std::abs(q - 1.0) <= tol)) {
    std::ostringstream os;
    os << "x0 is not on the ellipsoid boundary (x0^T C x0 = " << q << ")";
    throw Error(ErrorKind::NotOnBoundary, os.str());
  }
  return UnitVector::normalized(e.B_inv().matrix() * x0);
}

bool is_eigenvector(const SpdMatrix& c, const UnitVector& y) {
  const Vector cy = c.matrix() * y.coords();
  const double rayleigh = dot(cy, y.coords());
  double d = 0.0;
  for (std::size_t i = 0; i < cy.size(); ++i) d += (cy[i] - rayleigh * y[i]) * (cy[i] - rayleigh * y[i]);
  return std::sqrt(d) <= kEigenvectorTol * c.matrix().max_abs();
}

PlanarSearchState planar_search_state(const Matrix& a, double psi, double theta) {
  PlanarSearchState s;
  s.theta = theta;
  s.phi = psi - theta;
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  s.g11 = c * c * a(0, 0) + 2.0 * c * sn * a(0, 1) + sn * sn * a(1, 1);
  s.g22 = sn * sn * a(0, 0) - 2.0 * c * sn * a(0, 1) + c * c * a(1, 1);
  s.F = std::atan(std::sqrt(s.g22 / s.g11)) - s.phi;
  return s;
}

Construction construct_vertex_2d(const Ellipsoid& e, std::span<const double> x0, FunctionalKind kind,
                                 double boundary_tol) {
  if (e.n() != 2) throw Error(ErrorKind::WrongDimension, "planar construction needs n = 2");
  const UnitVector y0 = boundary_direction(e, x0, boundary_tol);
  const double psi = std::atan2(y0[1], y0[0]);
  const Matrix& a = e.A().matrix();

  // On θ ∈ (ψ − π/2, ψ) the angle φ sweeps (0, π/2) downwards while
  // arctan√(g22/g11) stays strictly inside (0, π/2), so F goes from negative
  // to positive. Shrink the margin until the endpoint signs confirm this.
  double margin = 1e-6;
  double lo = psi - std::numbers::pi / 2.0 + margin;
  double hi = psi - margin;
  double flo = planar_search_state(a, psi, lo).F;
  double fhi = planar_search_state(a, psi, hi).F;
  while ((flo >= 0.0 || fhi <= 0.0) && margin > 1e-15) {
    margin *= 1e-2;
    lo = psi - std::numbers::pi / 2.0 + margin;
    hi = psi - margin;
    flo = planar_search_state(a, psi, lo).F;
    fhi = planar_search_state(a, psi, hi).F;
  }
  if (flo >= 0.0 || fhi <= 0.0) {
    throw Error(ErrorKind::DegenerateVertex, "no sign change of F on the admissible frame range");
  }

  double theta = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    theta = 0.5 * (lo + hi);
    const double f = planar_search_state(a, psi, theta).F;
    if (std::abs(f) <= 1e-13) break;
    if (f < 0.0) {
      lo = theta;
    } else {
      hi = theta;
    }
  }
  // secant polish from the bracket ends nearest the root
  {
    double x0s = lo;
    double x1s = theta;
    double f0 = planar_search_state(a, psi, x0s).F;
    double f1 = planar_search_state(a, psi, x1s).F;
    for (int it = 0; it < 3 && f1 != f0 && f1 != 0.0; ++it) {
      const double x2 = x1s - f1 * (x1s - x0s) / (f1 - f0);
      if (!(x2 > psi - std::numbers::pi / 2.0 && x2 < psi)) break;
      x0s = x1s;
      f0 = f1;
      x1s = x2;
      f1 = planar_search_state(a, psi, x1s).F;
    }
    if (std::abs(f1) < std::abs(planar_search_state(a, psi, theta).F)) theta = x1s;
  }

  const double c = std::cos(theta);
  const double s = std::sin(theta);
  OrthoMatrix u(Matrix::from_rows({{c, -s}, {s, c}}));
  VertexFrame vf = vertex_lambdas(u, y0);
  const Vector x(x0.begin(), x0.end());
  return finish(e, {std::move(vf.U), std::move(vf.lambda), kind, "vertex_planar", &x});
}

Construction construct_vertex_ball(const Ellipsoid& e, std::span<const double> x0, FunctionalKind kind,
                                   double boundary_tol) {
  require_dimension_at_least(e, 2, "vertex construction");
  const UnitVector y0 = boundary_direction(e, x0, boundary_tol);
  VertexFrame vf = vertex_lambdas(barycentric_basis(y0), y0);
  const Vector x(x0.begin(), x0.end());
  return finish(e, {std::move(vf.U), std::move(vf.lambda), kind, "vertex_ball", &x});
}

namespace {

UnitVector eigen_direction(const Ellipsoid& e, std::span<const double> x0, const VertexOptions& o) {
  require_dimension_at_least(e, 3, "eigenvector vertex construction");
  UnitVector y0 = boundary_direction(e, x0, o.boundary_tol);
  if (!is_eigenvector(e.C(), y0)) {
    throw Error(ErrorKind::NotEigenvector, "B^{-1} x0 is not an eigenvector of A^{-1}");
  }
  return y0;
}

}  // namespace

Construction construct_vertex_eigen_S(const Ellipsoid& e, std::span<const double> x0,
                                      const VertexOptions& options) {
  const UnitVector y0 = eigen_direction(e, x0, options);
  const OrthoMatrix u0 = barycentric_basis(y0);
  const SymMatrix m(u0.matrix().transposed() * e.C().matrix() * u0.matrix());
  BarycentricOptions bo;
  bo.tol = options.tol;
  bo.seed = options.seed;
  const EqualizationReport eq = equalize_diagonal_barycentric(m, bo);
  require_converged(eq);
  VertexFrame vf = vertex_lambdas(u0 * eq.V, y0);
  const Vector x(x0.begin(), x0.end());
  return finish(e, {std::move(vf.U), std::move(vf.lambda), FunctionalKind::FacetArea,
                    "vertex_eigen_barycentric", &x});
}

Construction construct_vertex_eigen_L(const Ellipsoid& e, std::span<const double> x0,
                                      const VertexOptions& options) {
  const UnitVector y0 = eigen_direction(e, x0, options);
  const OrthoMatrix u0 = barycentric_basis(y0);
  const SymMatrix m(u0.matrix().transposed() * e.A().matrix() * u0.matrix());
  BarycentricOptions bo;
  bo.tol = options.tol;
  bo.seed = options.seed;
  const EqualizationReport eq = equalize_diagonal_barycentric(m, bo);
  const Vector x(x0.begin(), x0.end());
  if (eq.converged) {
    VertexFrame vf = vertex_lambdas(u0 * eq.V, y0);
    return finish(e, {std::move(vf.U), std::move(vf.lambda), FunctionalKind::EdgeLength,
                      "vertex_eigen_barycentric", &x});
  }

  // The barycentric family can be empty (always for n = 3 unless the diagonal
  // is already constant); solve diag(UᵀAU) = tr(A)·z⊙z directly instead.
  const RestrictedSchurHornResult rsh =
      solve_restricted_schur_horn(e.A().sym(), y0, u0 * eq.V, 1e-15);
  const double limit = options.tol * (1.0 + e.A().matrix().trace());
  if (!(rsh.residual <= limit)) {
    std::ostringstream os;
    os << "restricted diagonal condition not met (residual " << rsh.residual << " > " << limit
       << ")";
    throw Error(ErrorKind::NotConverged, os.str());
  }
  VertexFrame vf = vertex_lambdas(rsh.U, y0);
  return finish(e, {std::move(vf.U), std::move(vf.lambda), FunctionalKind::EdgeLength,
                    "vertex_eigen_rotation_solve", &x});
}

Construction construct_through_vertex(const Ellipsoid& e, std::span<const double> x0,
                                      FunctionalKind kind, const VertexOptions& options) {
  require_dimension_at_least(e, 2, "vertex construction");
  if (e.n() == 2) return construct_vertex_2d(e, x0, kind, options.boundary_tol);

  const Matrix& a = e.A().matrix();
  const double mean = a.trace() / static_cast<double>(e.n());
  if (max_abs_diff(a, mean * Matrix::identity(e.n())) <= 1e-12 * std::abs(mean)) {
    return construct_vertex_ball(e, x0, kind, options.boundary_tol);
  }
  const UnitVector y0 = boundary_direction(e, x0, options.boundary_tol);
  if (is_eigenvector(e.C(), y0)) {
    return kind == FunctionalKind::FacetArea ? construct_vertex_eigen_S(e, x0, options)
                                             : construct_vertex_eigen_L(e, x0, options);
  }
  throw Error(ErrorKind::UnsupportedCase,
              "vertex-constrained maximization is only constructed for n = 2, balls and "
              "eigenvector directions; use explore-rsh for numerical evidence in this case");
}

}  // namespace inscribed
