#include "inscribed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "inscribed/error.hpp"

namespace inscribed {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
    }
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns) {
  const std::size_t n = columns.size();
  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (columns[j].size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "column length differs from column count");
    }
    m.set_column(j, columns[j]);
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, std::span<const double> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Vector Matrix::diag() const {
  Vector d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
  return d;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix sum");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix difference");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot product");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

double determinant(const Matrix& a) {
  if (!a.square()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  Matrix lu = a;
  const std::size_t n = lu.rows();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      det = -det;
    }
    det *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  return det;
}

Vector solve_linear(const Matrix& a, std::span<const double> b) {
  if (!a.square() || a.rows() != b.size()) throw Error(ErrorKind::DimensionMismatch, "solve_linear");
  const std::size_t n = a.rows();
  Matrix lu = a;
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == 0.0) throw Error(ErrorKind::Degenerate, "singular linear system");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = k + 1; j < n; ++j) x[k] -= lu(k, j) * x[j];
    x[k] /= lu(k, k);
  }
  return x;
}

double orthogonality_defect(const Matrix& u) {
  return max_abs_diff(u.transposed() * u, Matrix::identity(u.cols()));
}

void rotate_columns(Matrix& m, std::size_t p, std::size_t q, double c, double s) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double mp = m(i, p);
    const double mq = m(i, q);
    m(i, p) = c * mp + s * mq;
    m(i, q) = -s * mp + c * mq;
  }
}

void rotate_congruence(Matrix& d, std::size_t p, std::size_t q, double c, double s) {
  rotate_columns(d, p, q, c, s);
  for (std::size_t j = 0; j < d.cols(); ++j) {
    const double dp = d(p, j);
    const double dq = d(q, j);
    d(p, j) = c * dp + s * dq;
    d(q, j) = -s * dp + c * dq;
  }
  // keep the stored matrix exactly symmetric
  for (std::size_t j = 0; j < d.cols(); ++j) {
    d(j, p) = d(p, j);
    d(j, q) = d(q, j);
  }
}

SymMatrix::SymMatrix(const Matrix& m) : m_(m) {
  if (!m.square()) throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
}

SymMatrix SymMatrix::checked(const Matrix& m, double rel_tol) {
  if (!m.square()) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
  const double asym = max_abs_diff(m, m.transposed());
  if (asym > rel_tol * std::max(m.max_abs(), 1e-300)) {
    std::ostringstream os;
    os << "not symmetric (max |a_ij - a_ji| = " << asym << ")";
    throw Error(ErrorKind::NotSymmetric, os.str());
  }
  return SymMatrix(m);
}

OrthoMatrix::OrthoMatrix(Matrix u, double tol) : u_(std::move(u)) {
  if (!u_.square()) throw Error(ErrorKind::DimensionMismatch, "orthogonal matrix must be square");
  const double defect = orthogonality_defect(u_);
  if (!(defect <= tol)) {
    std::ostringstream os;
    os << "||U^T U - I||_max = " << defect << " exceeds " << tol;
    throw Error(ErrorKind::NotOrthogonal, os.str());
  }
}

OrthoMatrix OrthoMatrix::identity(std::size_t n) { return OrthoMatrix(Matrix::identity(n)); }

OrthoMatrix operator*(const OrthoMatrix& a, const OrthoMatrix& b) {
  return OrthoMatrix(a.matrix() * b.matrix());
}

UnitVector::UnitVector(Vector v, double tol) : v_(std::move(v)) {
  const double len = norm(v_);
  if (!(std::abs(len - 1.0) <= tol)) {
    std::ostringstream os;
    os << "vector norm " << len << " is not 1";
    throw Error(ErrorKind::NotUnit, os.str());
  }
}

UnitVector UnitVector::normalized(Vector v) {
  const double len = norm(v);
  if (!(len > 0.0)) throw Error(ErrorKind::NotUnit, "cannot normalize a zero vector");
  for (double& x : v) x /= len;
  return UnitVector(std::move(v));
}

Eigh eigh(const SymMatrix& s) {
  const std::size_t n = s.n();
  Matrix d = s.matrix();
  Matrix q = Matrix::identity(n);
  const double scale = std::max(d.max_abs(), 1e-300);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t r = p + 1; r < n; ++r) off += d(p, r) * d(p, r);
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double apr = d(p, r);
        if (std::abs(apr) <= 1e-300) continue;
        // Annihilating rotation (Rutishauser's formulation).
        const double theta = (d(r, r) - d(p, p)) / (2.0 * apr);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double sn = t * c;
        rotate_congruence(d, p, r, c, -sn);
        rotate_columns(q, p, r, c, -sn);
        d(p, r) = 0.0;
        d(r, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d(a, a) < d(b, b); });
  Vector values(n);
  Matrix vectors(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = d(order[k], order[k]);
    vectors.set_column(k, q.column(order[k]));
  }
  return Eigh{std::move(values), OrthoMatrix(std::move(vectors))};
}

SpdMatrix::SpdMatrix(const SymMatrix& s, double rel_tol) : s_(s), eig_(eigh(s)) {
  const double lo = eig_.values.front();
  const double hi = eig_.values.back();
  if (!(hi > 0.0) || !(lo > rel_tol * hi)) {
    std::ostringstream os;
    os << "not positive definite (eigenvalues in [" << lo << ", " << hi << "])";
    throw Error(ErrorKind::NotPositiveDefinite, os.str());
  }
}

double SpdMatrix::determinant() const {
  double det = 1.0;
  for (double v : eig_.values) det *= v;
  return det;
}

namespace {

// Q·diag(f(λ))·Qᵀ
Matrix spectral_map(const SpdMatrix& a, double (*f)(double)) {
  const Matrix& q = a.eigenvectors().matrix();
  const std::size_t n = a.n();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(a.eigenvalues()[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const double qik = q(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += qik * q(j, k);
    }
  }
  return out;
}

}  // namespace

SpdMatrix spd_sqrt(const SpdMatrix& a) {
  return SpdMatrix(SymMatrix(spectral_map(a, [](double x) { return std::sqrt(x); })));
}

SpdMatrix spd_inverse(const SpdMatrix& a) {
  return SpdMatrix(SymMatrix(spectral_map(a, [](double x) { return 1.0 / x; })));
}

OrthoMatrix householder_to(const UnitVector& a, const UnitVector& b) {
  if (a.n() != b.n()) throw Error(ErrorKind::DimensionMismatch, "householder_to");
  const std::size_t n = a.n();
  Vector w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = a[i] - b[i];
  const double len = norm(w);
  if (len < 1e-14) return OrthoMatrix::identity(n);
  for (double& x : w) x /= len;
  Matrix h = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * w[i] * w[j];
  return OrthoMatrix(std::move(h));
}

Matrix orthonormalize_columns(const Matrix& a) {
  const std::size_t n = a.cols();
  Matrix q = a;
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = q.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const Vector qk = q.column(k);
        const double r = dot(qk, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= r * qk[i];
      }
    }
    const double len = norm(v);
    if (!(len > 0.0)) throw Error(ErrorKind::Degenerate, "columns are linearly dependent");
    for (double& x : v) x /= len;
    q.set_column(j, v);
  }
  return q;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

OrthoMatrix random_orthogonal(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = gauss(rng);
  return OrthoMatrix(orthonormalize_columns(g));
}

OrthoMatrix random_orthogonal(std::size_t n, std::uint64_t seed) {
  Rng rng(stream_seed(seed, 0));
  return random_orthogonal(n, rng);
}

}  // namespace inscribed
