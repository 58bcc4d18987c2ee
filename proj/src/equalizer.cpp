#include "inscribed/equalizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "inscribed/error.hpp"

namespace inscribed {

namespace {

using Block3 = std::array<std::array<double, 3>, 3>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rodrigues rotation by theta about (1,1,1)/√3.
Block3 ones_axis_block(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta) / std::numbers::sqrt3;
  const double k = (1.0 - c) / 3.0;
  return {{{c + k, -s + k, s + k}, {s + k, c + k, -s + k}, {-s + k, s + k, c + k}}};
}

// m <- m · R, R the block embedded at (p, q, r)
void apply_block_columns(Matrix& m, std::size_t p, std::size_t q, std::size_t r, const Block3& b) {
  const std::array<std::size_t, 3> idx{p, q, r};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const std::array<double, 3> row{m(i, p), m(i, q), m(i, r)};
    for (std::size_t j = 0; j < 3; ++j)
      m(i, idx[j]) = row[0] * b[0][j] + row[1] * b[1][j] + row[2] * b[2][j];
  }
}

// Diagonal of Rᵀ D R restricted to (p, q, r).
std::array<double, 3> rotated_block_diagonal(const Matrix& d, std::size_t p, std::size_t q,
                                             std::size_t r, double theta) {
  const std::array<std::size_t, 3> idx{p, q, r};
  const Block3 b = ones_axis_block(theta);
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) s += b[i][k] * d(idx[i], idx[j]) * b[j][k];
    out[k] = s;
  }
  return out;
}

double mean_diagonal(const Matrix& d) { return d.trace() / static_cast<double>(d.rows()); }

double max_diag_deviation(const Matrix& d, double target) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) m = std::max(m, std::abs(d(i, i) - target));
  return m;
}

// Ψ after rotating the (p, q, r) block by theta.
double variance_after(const Matrix& d, double psi, double target, std::size_t p, std::size_t q,
                      std::size_t r, double theta) {
  const std::array<double, 3> nd = rotated_block_diagonal(d, p, q, r, theta);
  const std::array<std::size_t, 3> idx{p, q, r};
  double out = psi;
  for (std::size_t k = 0; k < 3; ++k) {
    const double before = d(idx[k], idx[k]) - target;
    const double after = nd[k] - target;
    out += after * after - before * before;
  }
  return std::max(out, 0.0);
}

Matrix congruence(const Matrix& m, const Matrix& v) { return v.transposed() * m * v; }

}  // namespace

double diagonal_variance(const Matrix& d) {
  const double t = mean_diagonal(d);
  double psi = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) psi += (d(i, i) - t) * (d(i, i) - t);
  return psi;
}

EqualizationReport equalize_diagonal(const SymMatrix& m, double tol) {
  const std::size_t n = m.n();
  if (n == 0) throw Error(ErrorKind::DimensionTooSmall, "empty matrix");
  const double target = m.matrix().trace() / static_cast<double>(n);
  const double abs_tol = tol * (1.0 + std::abs(target));

  Matrix d = m.matrix();
  Matrix v = Matrix::identity(n);
  std::vector<bool> pinned(n, false);

  EqualizationReport report;
  report.tol = tol;
  report.variance_history.push_back(diagonal_variance(d));

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t p = n;
    std::size_t q = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) continue;
      if (p == n || d(i, i) > d(p, p)) p = i;
      if (q == n || d(i, i) < d(q, q)) q = i;
    }
    if (d(p, p) - target <= abs_tol && target - d(q, q) <= abs_tol) break;

    // d_p(θ) = (a+c)/2 + ((a−c)/2)cos2θ + b·sin2θ, solved for d_p(θ) = target.
    const double a = d(p, p);
    const double c = d(q, q);
    const double b = d(p, q);
    const double half = 0.5 * (a - c);
    const double radius = std::hypot(half, b);
    const double kappa = std::clamp((target - 0.5 * (a + c)) / radius, -1.0, 1.0);
    const double two_theta = std::atan2(b, half) + std::acos(kappa);
    const double cs = std::cos(0.5 * two_theta);
    const double sn = std::sin(0.5 * two_theta);

    rotate_congruence(d, p, q, cs, sn);
    rotate_columns(v, p, q, cs, sn);
    pinned[p] = true;
    ++report.iterations;
    ++report.rotations;
    report.variance_history.push_back(diagonal_variance(d));
  }

  const Matrix final_d = congruence(m.matrix(), v);
  report.final_psi = diagonal_variance(final_d);
  report.max_diag_residual = max_diag_deviation(final_d, target);
  report.converged = report.max_diag_residual <= abs_tol;
  report.V = OrthoMatrix(std::move(v));
  return report;
}

OrthoMatrix rotation_about_ones_axis(std::size_t n, const RotationTriple& t) {
  if (t.p >= n || t.q >= n || t.r >= n || t.p == t.q || t.q == t.r || t.p == t.r) {
    std::ostringstream os;
    os << "rotation triple (" << t.p << ", " << t.q << ", " << t.r << ") invalid for n = " << n;
    throw Error(ErrorKind::IndexError, os.str());
  }
  Matrix r = Matrix::identity(n);
  apply_block_columns(r, t.p, t.q, t.r, ones_axis_block(t.theta));
  return OrthoMatrix(std::move(r));
}

std::vector<double> equalizing_angles(const Matrix& d, std::size_t p, std::size_t q,
                                      std::size_t r) {
  auto f = [&](double theta) {
    const std::array<double, 3> nd = rotated_block_diagonal(d, p, q, r, theta);
    return nd[0] - nd[1];
  };
  const double scale = std::max(d.max_abs(), 1e-300);
  std::vector<double> roots;
  if (std::abs(f(0.0)) <= 1e-15 * scale) {
    roots.push_back(0.0);
  }

  // Each of [0, 2π/3] and [2π/3, 4π/3] is scanned on a fine grid; f has at most
  // four roots per period.
  constexpr int kGrid = 24;
  const double upper = 2.0 * kTwoPi / 3.0;
  double lo = 0.0;
  double flo = f(lo);
  for (int k = 1; k <= 2 * kGrid; ++k) {
    const double hi = upper * k / (2.0 * kGrid);
    const double fhi = f(hi);
    if (fhi == 0.0) {
      roots.push_back(hi);
    } else if (flo != 0.0 && std::signbit(flo) != std::signbit(fhi)) {
      double a = lo;
      double b = hi;
      double fa = flo;
      while (b - a > 1e-13) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(fa)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      // secant polish
      double x0 = a;
      double x1 = b;
      double f0 = f(x0);
      double f1 = f(x1);
      for (int it = 0; it < 3 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 >= lo && x2 <= hi)) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
      }
      roots.push_back(std::abs(f1) <= std::abs(f(0.5 * (a + b))) ? x1 : 0.5 * (a + b));
    }
    lo = hi;
    flo = fhi;
  }
  return roots;
}

namespace {

struct Triple {
  std::size_t p;
  std::size_t q;
  std::size_t r;
};

std::vector<Triple> all_triples(std::size_t n) {
  std::vector<Triple> out;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q)
      for (std::size_t r = q + 1; r < n; ++r) out.push_back({p, q, r});
  return out;
}

struct Step {
  Matrix v;
  Matrix d;
  double psi = INFINITY;
  std::size_t rotations = 0;
};

// The pairwise step: rotate about some e_p + e_q + e_r so d_p and d_q become
// equal, choosing among all roots the one with the smallest resulting Ψ.
Step pairwise_step(const Matrix& m, const Matrix& v, const Matrix& d, double psi, double target,
                   std::size_t p, std::size_t q) {
  const std::size_t n = d.rows();
  double best_psi = INFINITY;
  Triple best{};
  double best_theta = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    for (double theta : equalizing_angles(d, p, q, r)) {
      const double cand = variance_after(d, psi, target, p, q, r, theta);
      if (cand < best_psi) {
        best_psi = cand;
        best = {p, q, r};
        best_theta = theta;
      }
    }
  }
  Step step;
  if (!std::isfinite(best_psi)) return step;
  step.v = v;
  apply_block_columns(step.v, best.p, best.q, best.r, ones_axis_block(best_theta));
  step.d = congruence(m, step.v);
  step.psi = diagonal_variance(step.d);
  step.rotations = 1;
  return step;
}

// Σ_{p,q,r} d_i(θ)² is K + ρ·cos(3θ − γ) along a ones-axis rotation, so its
// minimizer follows from three samples.
Step triple_minimizer_step(const Matrix& m, const Matrix& v, const Matrix& d, double psi,
                           double target, const std::vector<Triple>& triples) {
  double best_psi = INFINITY;
  Triple best{};
  double best_theta = 0.0;
  for (const Triple& t : triples) {
    const double g0 = variance_after(d, psi, target, t.p, t.q, t.r, 0.0);
    const double g1 = variance_after(d, psi, target, t.p, t.q, t.r, std::numbers::pi / 6.0);
    const double g2 = variance_after(d, psi, target, t.p, t.q, t.r, std::numbers::pi / 3.0);
    const double k = 0.5 * (g0 + g2);
    const double alpha = 0.5 * (g0 - g2);
    const double beta = g1 - k;
    const double theta = (std::atan2(beta, alpha) + std::numbers::pi) / 3.0;
    const double cand = variance_after(d, psi, target, t.p, t.q, t.r, theta);
    if (cand < best_psi) {
      best_psi = cand;
      best = t;
      best_theta = theta;
    }
  }
  Step step;
  if (!std::isfinite(best_psi)) return step;
  step.v = v;
  apply_block_columns(step.v, best.p, best.q, best.r, ones_axis_block(best_theta));
  step.d = congruence(m, step.v);
  step.psi = diagonal_variance(step.d);
  step.rotations = 1;
  return step;
}

// Damped Gauss–Newton on r(V) = diag(VᵀMV) − target·1 over the ones-axis
// rotation generators; the step is applied as a sequence of triple rotations.
Step gauss_newton_step(const Matrix& m, const Matrix& v, const Matrix& d, double psi,
                       double target, const std::vector<Triple>& triples, double& damping,
                       double decrease_floor) {
  const std::size_t n = d.rows();
  const std::size_t nt = triples.size();
  const double a = 1.0 / std::numbers::sqrt3;

  Vector resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = d(i, i) - target;

  // dr_i/dθ = 2(DK)_ii with K the generator of the (p, q, r) rotation.
  Matrix jac(n, nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const std::array<std::size_t, 3> idx{triples[k].p, triples[k].q, triples[k].r};
    // generator block: K[i][j] = a·{0, −1, +1; +1, 0, −1; −1, +1, 0}
    constexpr int kSign[3][3] = {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}};
    for (std::size_t ii = 0; ii < 3; ++ii) {
      double s = 0.0;
      for (std::size_t kk = 0; kk < 3; ++kk) s += d(idx[ii], idx[kk]) * a * kSign[kk][ii];
      jac(idx[ii], k) = 2.0 * s;
    }
  }
  const Matrix jjt = jac * jac.transposed();
  const double scale = std::max(jjt.trace() / static_cast<double>(n), 1e-300);
  Vector neg(n);
  for (std::size_t i = 0; i < n; ++i) neg[i] = -resid[i];

  for (int attempt = 0; attempt < 12; ++attempt) {
    Matrix sys = jjt;
    for (std::size_t i = 0; i < n; ++i) sys(i, i) += damping * scale;
    Vector y;
    try {
      y = solve_linear(sys, neg);
    } catch (const Error&) {
      damping *= 10.0;
      continue;
    }
    Step step;
    step.v = v;
    for (std::size_t k = 0; k < nt; ++k) {
      double delta = 0.0;
      for (std::size_t i = 0; i < n; ++i) delta += jac(i, k) * y[i];
      if (delta == 0.0) continue;
      apply_block_columns(step.v, triples[k].p, triples[k].q, triples[k].r, ones_axis_block(delta));
      ++step.rotations;
    }
    step.d = congruence(m, step.v);
    step.psi = diagonal_variance(step.d);
    if (step.psi <= (1.0 - decrease_floor) * psi) {
      damping = std::max(damping / 10.0, 1e-12);
      return step;
    }
    damping *= 10.0;
  }
  damping = 1e-3;
  return Step{};
}

Matrix random_stabilizer_element(std::size_t n, Rng& rng, const std::vector<Triple>& triples,
                                 std::size_t& rotations) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  Matrix r = Matrix::identity(n);
  for (const Triple& t : triples) {
    apply_block_columns(r, t.p, t.q, t.r, ones_axis_block(angle(rng)));
    ++rotations;
  }
  return r;
}

}  // namespace

EqualizationReport equalize_diagonal_barycentric(const SymMatrix& sym,
                                                 const BarycentricOptions& options) {
  const std::size_t n = sym.n();
  if (n < 3) {
    throw Error(ErrorKind::DimensionTooSmall,
                "barycentric equalization requires n >= 3 (the stabilizer of 1 is finite for n = 2)");
  }
  const Matrix& m = sym.matrix();
  const Vector ones(n, 1.0);
  const Vector m1 = m * ones;
  const double lambda = std::accumulate(m1.begin(), m1.end(), 0.0) / static_cast<double>(n);
  double row_dev = 0.0;
  for (double x : m1) row_dev = std::max(row_dev, std::abs(x - lambda));
  if (row_dev > 1e-9 * std::max(m.max_abs(), 1e-300)) {
    std::ostringstream os;
    os << "M·1 is not a multiple of 1 (max deviation " << row_dev << ")";
    throw Error(ErrorKind::NotRowConstant, os.str());
  }

  const double target = m.trace() / static_cast<double>(n);
  const double abs_tol = options.tol * (1.0 + std::abs(target));
  const std::size_t max_iter = options.max_iter == 0 ? 500 * n * n : options.max_iter;
  const std::vector<Triple> triples = all_triples(n);
  Rng rng(stream_seed(options.seed, 0));

  EqualizationReport report;
  report.tol = options.tol;

  Matrix v = Matrix::identity(n);
  Matrix d = m;
  double psi = diagonal_variance(d);
  report.variance_history.push_back(psi);

  Matrix best_v = v;
  double best_psi = psi;
  double best_dev = max_diag_deviation(d, target);
  double damping = 1e-3;
  std::size_t total_rotations = 0;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    const double dev = max_diag_deviation(d, target);
    if (dev < best_dev) {
      best_dev = dev;
      best_psi = psi;
      best_v = v;
    }
    if (dev <= abs_tol) {
      report.converged = true;
      break;
    }

    const double accept = (1.0 - options.decrease_floor) * psi;
    std::size_t p = 0;
    std::size_t q = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (d(i, i) > d(p, p)) p = i;
      if (d(i, i) < d(q, q)) q = i;
    }

    Step pair = pairwise_step(m, v, d, psi, target, p, q);
    Step gn = gauss_newton_step(m, v, d, psi, target, triples, damping, options.decrease_floor);
    Step* chosen = nullptr;
    bool chose_pair = false;
    if (pair.psi <= accept && pair.psi <= gn.psi) {
      chosen = &pair;
      chose_pair = true;
    } else if (gn.psi <= accept) {
      chosen = &gn;
    }

    Step fallback;
    if (chosen == nullptr) {
      // Every pair (p, q), then the exact per-triple minimizers.
      for (std::size_t a = 0; a < n && chosen == nullptr; ++a)
        for (std::size_t b = a + 1; b < n && chosen == nullptr; ++b) {
          fallback = pairwise_step(m, v, d, psi, target, a, b);
          if (fallback.psi <= accept) {
            chosen = &fallback;
            chose_pair = true;
          }
        }
      if (chosen == nullptr) {
        fallback = triple_minimizer_step(m, v, d, psi, target, triples);
        if (fallback.psi <= accept) chosen = &fallback;
      }
    }

    if (chosen == nullptr) {
      if (report.restarts >= options.max_restarts) {
        std::ostringstream os;
        os << "no rotation about any e_p+e_q+e_r axis decreases the diagonal variance (psi = "
           << psi << ") after " << report.restarts << " restarts";
        report.message = os.str();
        break;
      }
      ++report.restarts;
      v = v * random_stabilizer_element(n, rng, triples, total_rotations);
      d = congruence(m, v);
      psi = diagonal_variance(d);
      report.variance_history.assign(1, psi);
      report.iterations = 0;
      report.pairwise_steps = 0;
      report.gauss_newton_steps = 0;
      continue;
    }

    v = std::move(chosen->v);
    d = std::move(chosen->d);
    psi = chosen->psi;
    total_rotations += chosen->rotations;
    ++report.iterations;
    if (chose_pair) {
      ++report.pairwise_steps;
    } else {
      ++report.gauss_newton_steps;
    }
    report.variance_history.push_back(psi);
  }

  if (!report.converged) {
    const double dev = max_diag_deviation(d, target);
    if (dev <= abs_tol) {
      report.converged = true;
    } else if (dev < best_dev) {
      best_dev = dev;
      best_psi = psi;
      best_v = v;
    }
  }
  if (report.converged) {
    best_v = v;
  } else if (report.message.empty()) {
    report.message = "iteration cap reached";
  }

  const Matrix final_d = congruence(m, best_v);
  report.final_psi = diagonal_variance(final_d);
  report.max_diag_residual = max_diag_deviation(final_d, target);
  report.rotations = total_rotations;
  report.V = OrthoMatrix(std::move(best_v));
  (void)best_psi;
  return report;
}

OrthoMatrix stabilizer_descent(const SymMatrix& sym, const OrthoMatrix& start, double tol,
                               std::size_t max_iter) {
  const std::size_t n = sym.n();
  if (start.n() != n) throw Error(ErrorKind::DimensionMismatch, "stabilizer descent start");
  if (n < 3) return start;
  const Matrix& m = sym.matrix();
  const double target = m.trace() / static_cast<double>(n);
  const double abs_tol = tol * (1.0 + std::abs(target));
  const std::vector<Triple> triples = all_triples(n);
  Matrix v = start.matrix();
  Matrix d = congruence(m, v);
  double psi = diagonal_variance(d);
  double damping = 1e-3;
  for (std::size_t iter = 0; iter < max_iter && max_diag_deviation(d, target) > abs_tol; ++iter) {
    Step step = gauss_newton_step(m, v, d, psi, target, triples, damping, 0.0);
    if (!(step.psi < psi)) break;
    v = std::move(step.v);
    d = std::move(step.d);
    psi = step.psi;
  }
  return OrthoMatrix(orthonormalize_columns(v));
}

void require_converged(const EqualizationReport& report) {
  if (report.converged) return;
  std::ostringstream os;
  os << "diagonal equalization did not converge (max residual " << report.max_diag_residual
     << "): " << report.message;
  throw Error(ErrorKind::NotConverged, os.str());
}

OrthoMatrix barycentric_basis(const UnitVector& y0) {
  const std::size_t n = y0.n();
  const Vector center(n, 1.0 / std::sqrt(static_cast<double>(n)));
  return householder_to(UnitVector(center), y0);
}

double restricted_schur_horn_residual(const Matrix& a, const UnitVector& y0, const Matrix& u) {
  const std::size_t n = u.rows();
  const double tr = a.trace();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector ui = u.column(i);
    const double z = dot(ui, y0.coords());
    const double r = dot(ui, a * ui) - tr * z * z;
    sum += r * r;
  }
  return std::sqrt(sum);
}

RestrictedSchurHornResult solve_restricted_schur_horn(const SymMatrix& sym, const UnitVector& y0,
                                                      const OrthoMatrix& start, double tol,
                                                      std::size_t max_iter) {
  const Matrix& a = sym.matrix();
  const std::size_t n = sym.n();
  if (y0.n() != n || start.n() != n) {
    throw Error(ErrorKind::DimensionMismatch, "restricted Schur-Horn inputs");
  }
  const double tr = a.trace();
  const double abs_tol = tol * (1.0 + std::abs(tr));

  Matrix u = start.matrix();
  double res = restricted_schur_horn_residual(a, y0, u);
  double damping = 1e-3;
  std::size_t iter = 0;

  std::vector<std::pair<std::size_t, std::size_t>> planes;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) planes.emplace_back(p, q);

  for (; iter < max_iter && res > abs_tol; ++iter) {
    const Matrix d = congruence(a, u);
    const Vector z = u.transposed() * y0.coords();
    Vector neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -(d(i, i) - tr * z[i] * z[i]);
    // Rotating columns (p, q) by θ: d(d_pp)/dθ = 2d_pq, d(z_p²)/dθ = 2z_p z_q.
    Matrix jac(n, planes.size());
    for (std::size_t k = 0; k < planes.size(); ++k) {
      const auto [p, q] = planes[k];
      const double g = 2.0 * d(p, q) - 2.0 * tr * z[p] * z[q];
      jac(p, k) = g;
      jac(q, k) = -g;
    }
    const Matrix jjt = jac * jac.transposed();
    const double scale = std::max(jjt.trace() / static_cast<double>(n), 1e-300);

    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      Matrix sys = jjt;
      for (std::size_t i = 0; i < n; ++i) sys(i, i) += damping * scale;
      Vector y;
      try {
        y = solve_linear(sys, neg);
      } catch (const Error&) {
        damping *= 10.0;
        continue;
      }
      Matrix cand = u;
      for (std::size_t k = 0; k < planes.size(); ++k) {
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta += jac(i, k) * y[i];
        if (delta != 0.0) rotate_columns(cand, planes[k].first, planes[k].second, std::cos(delta), std::sin(delta));
      }
      const double cand_res = restricted_schur_horn_residual(a, y0, cand);
      if (cand_res < res) {
        u = std::move(cand);
        res = cand_res;
        damping = std::max(damping / 10.0, 1e-12);
        accepted = true;
      } else {
        damping *= 10.0;
      }
    }
    if (!accepted) break;
  }

  RestrictedSchurHornResult out;
  out.U = OrthoMatrix(orthonormalize_columns(u));
  out.residual = restricted_schur_horn_residual(a, y0, out.U.matrix());
  out.iterations = iter;
  return out;
}

}  // namespace inscribed
