#include "inscribed/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inscribed/error.hpp"
#include "inscribed/tolerance.hpp"

namespace inscribed {

std::string_view to_string(FunctionalKind kind) {
  return kind == FunctionalKind::EdgeLength ? "edge_length" : "facet_area";
}

FunctionalKind parse_functional(std::string_view s) {
  if (s == "edge" || s == "edge_length") return FunctionalKind::EdgeLength;
  if (s == "facet" || s == "facet_area") return FunctionalKind::FacetArea;
  throw Error(ErrorKind::ParseError, "unknown functional '" + std::string(s) + "'");
}

Vector congruence_diagonal(const OrthoMatrix& u, const Matrix& m) {
  const std::size_t n = u.n();
  if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::DimensionMismatch, "UᵀMU");
  Vector d(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const Vector uk = u.column(k);
    d[k] = dot(uk, m * uk);
  }
  return d;
}

FunctionalValue edge_length_total(const Ellipsoid& e, const SphereOrthotope& q) {
  if (e.n() != q.n()) throw Error(ErrorKind::DimensionMismatch, "ellipsoid vs orthotope");
  const Vector g = congruence_diagonal(q.U(), e.A().matrix());
  double sum = 0.0;
  for (std::size_t i = 0; i < q.n(); ++i) sum += q.lambda()[i] * std::sqrt(g[i]);
  return {std::ldexp(sum, static_cast<int>(q.n()) - 1), FunctionalKind::EdgeLength, q.condition()};
}

FunctionalValue edge_length_total(const Parallelepiped& p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) sum += norm(p.edge(i));
  return {std::ldexp(sum, static_cast<int>(p.n()) - 1), FunctionalKind::EdgeLength, 1.0};
}

namespace {

Matrix remove_row_col(const Matrix& g, std::size_t skip) {
  const std::size_t n = g.rows();
  Matrix out(n - 1, n - 1);
  for (std::size_t i = 0, oi = 0; i < n; ++i) {
    if (i == skip) continue;
    for (std::size_t j = 0, oj = 0; j < n; ++j) {
      if (j == skip) continue;
      out(oi, oj++) = g(i, j);
    }
    ++oi;
  }
  return out;
}

double edge_condition(const Parallelepiped& p) {
  double lo = INFINITY;
  double hi = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double len = norm(p.edge(i));
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  return hi / lo;
}

}  // namespace

FunctionalValue facet_area_total_gram(const Parallelepiped& p) {
  const Matrix g = p.gram();
  const std::size_t n = p.n();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double minor = n == 1 ? 1.0 : determinant(remove_row_col(g, i));
    if (!(minor > 0.0)) {
      std::ostringstream os;
      os << "principal minor " << i << " of the Gram matrix is " << minor;
      throw Error(ErrorKind::SingularGram, os.str());
    }
    sum += std::sqrt(minor);
  }
  return {2.0 * sum, FunctionalKind::FacetArea, edge_condition(p)};
}

FunctionalValue facet_area_total_factored(const Ellipsoid& e, const SphereOrthotope& q) {
  if (e.n() != q.n()) throw Error(ErrorKind::DimensionMismatch, "ellipsoid vs orthotope");
  const Vector alpha_sq = congruence_diagonal(q.U(), e.C().matrix());
  double prod = 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < q.n(); ++i) {
    prod *= q.lambda()[i];
    sum += std::sqrt(alpha_sq[i]) / q.lambda()[i];
  }
  return {2.0 * std::sqrt(e.A().determinant()) * prod * sum, FunctionalKind::FacetArea,
          q.condition()};
}

FunctionalValue evaluate(FunctionalKind kind, const Ellipsoid& e, const SphereOrthotope& q) {
  if (kind == FunctionalKind::EdgeLength) return edge_length_total(e, q);
  FunctionalValue v = facet_area_total_gram(orthotope_to_parallelepiped(e, q));
  v.condition = q.condition();
  return v;
}

double bound_L_max(const Ellipsoid& e) {
  return std::ldexp(std::sqrt(e.A().matrix().trace()), static_cast<int>(e.n()));
}

double bound_S_max(const Ellipsoid& e) {
  const double n = static_cast<double>(e.n());
  return std::ldexp(1.0, static_cast<int>(e.n())) * std::pow(n, -(n - 2.0) / 2.0) *
         std::sqrt(e.A().determinant()) * std::sqrt(e.C().matrix().trace());
}

double bound(FunctionalKind kind, const Ellipsoid& e) {
  return kind == FunctionalKind::EdgeLength ? bound_L_max(e) : bound_S_max(e);
}

namespace {

void require_positive(std::span<const double> x, const char* what) {
  if (x.empty()) throw Error(ErrorKind::NonPositiveInput, std::string(what) + " is empty");
  for (double v : x)
    if (!(v > 0.0)) throw Error(ErrorKind::NonPositiveInput, std::string(what) + " must be positive");
}

}  // namespace

double phi(std::span<const double> lambda) {
  require_positive(lambda, "lambda");
  double prod = 1.0;
  double inv_sq = 0.0;
  for (double l : lambda) {
    prod *= l;
    inv_sq += 1.0 / (l * l);
  }
  return prod * std::sqrt(inv_sq);
}

double phi_max(std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::ldexp(1.0, static_cast<int>(n) - 1) * std::pow(nd, (2.0 - nd) / 2.0);
}

double beta_product_sum(std::span<const double> beta) {
  require_positive(beta, "beta");
  double sum_sq = 0.0;
  for (double b : beta) sum_sq += b * b;
  if (!(std::abs(sum_sq - 1.0) <= kConstraintTol)) {
    throw Error(ErrorKind::ConstraintViolated, "sum of squared beta must be 1");
  }
  double prod = 1.0;
  double inv = 0.0;
  for (double b : beta) {
    prod *= b;
    inv += 1.0 / b;
  }
  return prod * inv;
}

double beta_product_sum_bound(std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::pow(nd, (3.0 - nd) / 2.0);
}

double maclaurin_gap(std::span<const double> x) {
  require_positive(x, "x");
  const double n = static_cast<double>(x.size());
  double inv = 0.0;
  double sum = 0.0;
  double prod = 1.0;
  for (double v : x) {
    inv += 1.0 / v;
    sum += v;
    prod *= v;
  }
  if (!(std::abs(inv / n - 1.0) <= kConstraintTol)) {
    throw Error(ErrorKind::ConstraintViolated, "mean of reciprocals must be 1");
  }
  return prod - sum / n;
}

std::pair<double, double> planar_identity_check(const SpdMatrix& a) {
  if (a.n() != 2) throw Error(ErrorKind::WrongDimension, "planar identity needs a 2x2 matrix");
  const SpdMatrix c = spd_inverse(a);
  return {a.determinant() * c.matrix().trace(), a.matrix().trace()};
}

}  // namespace inscribed
