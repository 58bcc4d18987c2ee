#pragma once

// Dense small-dimension matrix kernels. Everything here is sized for n up to
// about 16: storage is a row-major std::vector and the eigensolver is cyclic
// Jacobi.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace inscribed {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// Builds from nested rows; throws DimensionMismatch on ragged input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  /// Builds a square matrix whose j-th column is columns[j].
  static Matrix from_columns(const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);
  Vector diag() const;
  std::vector<std::vector<double>> to_rows() const;

  Matrix transposed() const;
  double max_abs() const;
  double trace() const;
  double frobenius() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);
/// Determinant by LU with partial pivoting.
double determinant(const Matrix& a);
/// Solves a·x = b by LU with partial pivoting; throws Degenerate if singular.
Vector solve_linear(const Matrix& a, std::span<const double> b);
/// ‖UᵀU − I‖_max
double orthogonality_defect(const Matrix& u);

/// Right-multiplies m by the plane rotation G acting on columns (p, q):
///   col_p <- c·col_p + s·col_q,  col_q <- −s·col_p + c·col_q.
void rotate_columns(Matrix& m, std::size_t p, std::size_t q, double c, double s);
/// Symmetric update d <- Gᵀ d G for the same plane rotation.
void rotate_congruence(Matrix& d, std::size_t p, std::size_t q, double c, double s);

/// A real symmetric matrix. The stored entries are exactly symmetric.
class SymMatrix {
 public:
  /// Symmetrizes m as (m + mᵀ)/2.
  explicit SymMatrix(const Matrix& m);
  /// Throws NotSymmetric when max|m_ij − m_ji| exceeds rel_tol·‖m‖_max.
  static SymMatrix checked(const Matrix& m, double rel_tol = 1e-12);

  std::size_t n() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Columns are orthonormal to within the tolerance given at construction.
class OrthoMatrix {
 public:
  /// Throws NotOrthogonal when ‖UᵀU − I‖_max > tol.
  explicit OrthoMatrix(Matrix u, double tol = 1e-10);
  static OrthoMatrix identity(std::size_t n);

  std::size_t n() const noexcept { return u_.rows(); }
  const Matrix& matrix() const noexcept { return u_; }
  double operator()(std::size_t i, std::size_t j) const { return u_(i, j); }
  Vector column(std::size_t j) const { return u_.column(j); }

 private:
  Matrix u_;
};

OrthoMatrix operator*(const OrthoMatrix& a, const OrthoMatrix& b);

class UnitVector {
 public:
  /// Throws NotUnit when |‖v‖ − 1| > tol.
  explicit UnitVector(Vector v, double tol = 1e-10);
  /// Scales v to unit length; throws NotUnit for a zero vector.
  static UnitVector normalized(Vector v);

  std::size_t n() const noexcept { return v_.size(); }
  const Vector& coords() const noexcept { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

 private:
  Vector v_;
};

struct Eigh {
  Vector values;  // ascending
  OrthoMatrix vectors;
};

/// Symmetric eigendecomposition by cyclic Jacobi sweeps.
Eigh eigh(const SymMatrix& s);

inline constexpr double kSpdRelTol = 1e-13;

/// Symmetric positive definite matrix with its eigendecomposition cached.
class SpdMatrix {
 public:
  /// Throws NotPositiveDefinite when min eigenvalue ≤ rel_tol · max eigenvalue.
  explicit SpdMatrix(const SymMatrix& s, double rel_tol = kSpdRelTol);

  std::size_t n() const noexcept { return s_.n(); }
  const SymMatrix& sym() const noexcept { return s_; }
  const Matrix& matrix() const noexcept { return s_.matrix(); }
  const Vector& eigenvalues() const noexcept { return eig_.values; }
  const OrthoMatrix& eigenvectors() const noexcept { return eig_.vectors; }
  double determinant() const;

 private:
  SymMatrix s_;
  Eigh eig_;
};

SpdMatrix spd_sqrt(const SpdMatrix& a);
SpdMatrix spd_inverse(const SpdMatrix& a);

/// Orthogonal W with W·a = b: the reflection through (a − b)/‖a − b‖, or the
/// identity when ‖a − b‖ < 1e-14.
OrthoMatrix householder_to(const UnitVector& a, const UnitVector& b);

/// Gram–Schmidt (with one reorthogonalization pass) of the columns of a. The
/// triangular factor has a positive diagonal by construction.
Matrix orthonormalize_columns(const Matrix& a);

using Rng = std::mt19937_64;

/// Seed for an independent stream derived from (seed, index) via splitmix64,
/// so per-trial randomness does not depend on execution order.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Haar-distributed orthogonal matrix: orthonormalized Gaussian matrix with
/// positive-diagonal triangular factor.
OrthoMatrix random_orthogonal(std::size_t n, Rng& rng);
OrthoMatrix random_orthogonal(std::size_t n, std::uint64_t seed);

}  // namespace inscribed
