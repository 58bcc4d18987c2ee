#include "inscribed/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inscribed/error.hpp"
#include "inscribed/tolerance.hpp"

namespace inscribed {

Ellipsoid::Ellipsoid(SpdMatrix a)
    : a_(std::move(a)), b_(spd_sqrt(a_)), c_(spd_inverse(a_)), b_inv_(spd_inverse(b_)) {}

double Ellipsoid::quadratic_form(std::span<const double> x) const {
  if (x.size() != n()) throw Error(ErrorKind::DimensionMismatch, "point dimension");
  return dot(x, c_.matrix() * x);
}

SphereOrthotope::SphereOrthotope(OrthoMatrix u, Vector lambda)
    : u_(std::move(u)), lambda_(std::move(lambda)) {
  if (u_.n() != lambda_.size()) throw Error(ErrorKind::DimensionMismatch, "frame vs lambda");
  double sum_sq = 0.0;
  for (double l : lambda_) {
    if (!(l > 0.0)) throw Error(ErrorKind::NonPositiveInput, "edge lengths must be positive");
    sum_sq += l * l;
  }
  if (!(std::abs(sum_sq - 4.0) <= kConstraintTol)) {
    std::ostringstream os;
    os << "sum of squared edge lengths is " << sum_sq << ", expected 4";
    throw Error(ErrorKind::ConstraintViolated, os.str());
  }
}

double SphereOrthotope::condition() const {
  const auto [lo, hi] = std::minmax_element(lambda_.begin(), lambda_.end());
  return *hi / *lo;
}

Parallelepiped::Parallelepiped(Matrix v) : v_(std::move(v)) {
  if (!v_.square() || v_.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "edge matrix must be square and non-empty");
  }
  const double scale = std::pow(v_.max_abs(), static_cast<double>(v_.rows()));
  const double det = determinant(v_);
  if (!(std::abs(det) > 1e-12 * scale)) {
    std::ostringstream os;
    os << "degenerate parallelepiped (|det V| = " << std::abs(det) << ")";
    throw Error(ErrorKind::Degenerate, os.str());
  }
}

Parallelepiped orthotope_to_parallelepiped(const Ellipsoid& e, const SphereOrthotope& q) {
  if (e.n() != q.n()) throw Error(ErrorKind::DimensionMismatch, "ellipsoid vs orthotope");
  Matrix w = q.U().matrix();
  for (std::size_t j = 0; j < q.n(); ++j)
    for (std::size_t i = 0; i < q.n(); ++i) w(i, j) *= q.lambda()[j];
  return Parallelepiped(e.B().matrix() * w);
}

SphereOrthotope parallelepiped_to_orthotope(const Ellipsoid& e, const Parallelepiped& p,
                                            double tol) {
  if (e.n() != p.n()) throw Error(ErrorKind::DimensionMismatch, "ellipsoid vs parallelepiped");
  const std::size_t n = p.n();
  const Matrix w = e.B_inv().matrix() * p.V();
  const Matrix g = w.transposed() * w;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(g(i, j)) > tol) {
        std::ostringstream os;
        os << "<w_" << i << ", w_" << j << "> = " << g(i, j);
        throw Error(ErrorKind::NotOrthotope, os.str());
      }
  if (std::abs(g.trace() - 4.0) > tol) {
    std::ostringstream os;
    os << "sum of squared sphere edge lengths is " << g.trace() << ", expected 4";
    throw Error(ErrorKind::NotInscribed, os.str());
  }
  Vector lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = std::sqrt(g(i, i));
  // Renormalize to Σλ² = 4 exactly and clean the frame to machine orthogonality;
  // both corrections are below tol.
  const double scale = 2.0 / norm(lambda);
  for (double& l : lambda) l *= scale;
  return SphereOrthotope(OrthoMatrix(orthonormalize_columns(w)), std::move(lambda));
}

std::vector<int> sign_vector(std::size_t n, std::size_t k) {
  std::vector<int> eps(n);
  for (std::size_t i = 0; i < n; ++i) eps[i] = ((k >> (n - 1 - i)) & 1U) ? 1 : -1;
  return eps;
}

std::vector<Vector> vertices(const Parallelepiped& p) {
  const std::size_t n = p.n();
  if (n > kMaxVertexDimension) {
    throw Error(ErrorKind::DimensionTooLarge, "vertex enumeration is capped at n = 20");
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::vector<int> eps = sign_vector(n, k);
    Vector x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += 0.5 * eps[j] * p.V()(i, j);
    out.push_back(std::move(x));
  }
  return out;
}

InscribedReport is_inscribed(const Ellipsoid& e, const Parallelepiped& p, double tol) {
  if (e.n() != p.n()) throw Error(ErrorKind::DimensionMismatch, "ellipsoid vs parallelepiped");
  InscribedReport report;
  for (const Vector& x : vertices(p)) {
    report.max_residual = std::max(report.max_residual, std::abs(e.quadratic_form(x) - 1.0));
  }
  report.inscribed = report.max_residual <= tol;
  return report;
}

Vector all_plus_vertex(const Parallelepiped& p) {
  Vector x(p.n(), 0.0);
  for (std::size_t j = 0; j < p.n(); ++j)
    for (std::size_t i = 0; i < p.n(); ++i) x[i] += 0.5 * p.V()(i, j);
  return x;
}

}  // namespace inscribed
