#include "inscribed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "inscribed/error.hpp"

namespace inscribed {

namespace {

struct TrialOutcome {
  bool skipped = true;
  double value = 0.0;
};

struct Partial {
  std::size_t skipped = 0;
  std::size_t violations = 0;
  double best = -INFINITY;
  std::size_t best_trial = 0;
  double worst_excess = 0.0;
};

// Runs trial(i) for i in [0, trials) across threads. Trial randomness depends
// only on (seed, i), and ties in the maximum go to the lowest index, so the
// result does not depend on scheduling.
template <class Trial>
SearchReport run_search(const Ellipsoid& e, FunctionalKind kind, const SearchOptions& options,
                        Trial&& trial) {
  if (options.trials == 0) throw Error(ErrorKind::NonPositiveInput, "trials must be >= 1");
  const double bnd = bound(kind, e);
  const double limit = bnd * (1.0 + options.slack);

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::min<std::size_t>(options.trials, 64))));
  if (options.trials < 256) threads = 1;

  SearchReport report;
  report.kind = kind;
  report.trials = options.trials;
  report.bound = bnd;
  if (options.record_trace) report.trace.assign(options.trials, std::numeric_limits<double>::quiet_NaN());

  std::vector<Partial> partials(threads);
  auto worker = [&](unsigned w) {
    Partial& part = partials[w];
    const std::size_t begin = options.trials * w / threads;
    const std::size_t end = options.trials * (w + 1) / threads;
    for (std::size_t i = begin; i < end; ++i) {
      const TrialOutcome out = trial(i);
      if (out.skipped) {
        ++part.skipped;
        continue;
      }
      if (options.record_trace) report.trace[i] = out.value;
      if (out.value > limit) {
        ++part.violations;
        part.worst_excess = std::max(part.worst_excess, (out.value - bnd) / bnd);
      }
      if (out.value > part.best) {
        part.best = out.value;
        part.best_trial = i;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
  }

  double best = -INFINITY;
  for (const Partial& part : partials) {
    report.skipped += part.skipped;
    report.violations += part.violations;
    report.worst_excess = std::max(report.worst_excess, part.worst_excess);
    // partials are in index order, so strict > keeps the lowest index on ties
    if (part.best > best) {
      best = part.best;
      report.best_trial = part.best_trial;
    }
  }
  if (std::isfinite(best)) {
    report.best_value = best;
    report.best_gap = (bnd - best) / bnd;
  }
  return report;
}

Vector folded_gaussian_lambda(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector g(n);
  for (double& x : g) x = std::abs(gauss(rng));
  const double s = 2.0 / norm(g);
  for (double& x : g) x *= s;
  return g;
}

std::optional<SphereOrthotope> global_sample(std::size_t n, std::uint64_t seed, std::size_t i) {
  Rng rng(stream_seed(seed, i));
  OrthoMatrix u = random_orthogonal(n, rng);
  Vector lambda = folded_gaussian_lambda(n, rng);
  for (double l : lambda)
    if (!(l > 0.0)) return std::nullopt;
  return SphereOrthotope(std::move(u), std::move(lambda));
}

std::optional<SphereOrthotope> vertex_sample(std::size_t n, const UnitVector& y0, std::uint64_t seed,
                                             std::size_t i) {
  Rng rng(stream_seed(seed, i));
  const OrthoMatrix u = random_orthogonal(n, rng);
  try {
    VertexFrame vf = vertex_lambdas(u, y0);
    const double s = 2.0 / norm(vf.lambda);
    for (double& l : vf.lambda) l *= s;
    return SphereOrthotope(std::move(vf.U), std::move(vf.lambda));
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::DegenerateVertex) return std::nullopt;
    throw;
  }
}

TrialOutcome evaluate_sample(const Ellipsoid& e, FunctionalKind kind,
                             const std::optional<SphereOrthotope>& q) {
  if (!q) return {};
  try {
    return {false, evaluate(kind, e, *q).value};
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::SingularGram || err.kind() == ErrorKind::Degenerate) return {};
    throw;
  }
}

}  // namespace

SearchReport random_search_global(const Ellipsoid& e, FunctionalKind kind,
                                  const SearchOptions& options) {
  const std::size_t n = e.n();
  SearchReport report = run_search(e, kind, options, [&](std::size_t i) {
    return evaluate_sample(e, kind, global_sample(n, options.seed, i));
  });
  if (report.best_value > 0.0) report.best_config = global_sample(n, options.seed, report.best_trial);
  return report;
}

SearchReport random_search_vertex(const Ellipsoid& e, std::span<const double> x0,
                                  FunctionalKind kind, const SearchOptions& options) {
  const std::size_t n = e.n();
  const UnitVector y0 = boundary_direction(e, x0, options.boundary_tol);
  SearchReport report = run_search(e, kind, options, [&](std::size_t i) {
    return evaluate_sample(e, kind, vertex_sample(n, y0, options.seed, i));
  });
  if (report.best_value > 0.0) {
    report.best_config = vertex_sample(n, y0, options.seed, report.best_trial);
  }
  return report;
}

double rsh_residual(const Ellipsoid& e, const UnitVector& y0, FunctionalKind target,
                    const OrthoMatrix& u) {
  const Matrix& m = target == FunctionalKind::EdgeLength ? e.A().matrix() : e.C().matrix();
  return restricted_schur_horn_residual(m, y0, u.matrix());
}

namespace {

double annealed_step(std::size_t k, std::size_t iters) {
  if (iters <= 1) return 0.3;
  const double t = static_cast<double>(k) / static_cast<double>(iters - 1);
  return 0.3 * std::pow(1e-6 / 0.3, t);
}

Matrix random_plane_rotation(const Matrix& u, Rng& rng, double step) {
  const std::size_t n = u.rows();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::normal_distribution<double> gauss(0.0, step);
  const std::size_t p = pick(rng);
  std::size_t q = pick(rng);
  while (q == p) q = pick(rng);
  const double t = gauss(rng);
  Matrix out = u;
  rotate_columns(out, p, q, std::cos(t), std::sin(t));
  return out;
}

RotationTriple random_triple(std::size_t n, Rng& rng, double theta) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  RotationTriple t;
  t.p = pick(rng);
  do t.q = pick(rng);
  while (t.q == t.p);
  do t.r = pick(rng);
  while (t.r == t.p || t.r == t.q);
  t.theta = theta;
  return t;
}

Matrix random_stabilizer_rotation(const Matrix& u, Rng& rng, double step) {
  std::normal_distribution<double> gauss(0.0, step);
  const std::size_t n = u.rows();
  return u * rotation_about_ones_axis(n, random_triple(n, rng, gauss(rng))).matrix();
}

}  // namespace

RshReport explore_restricted_schur_horn(const Ellipsoid& e, const UnitVector& y0,
                                        FunctionalKind target, const RshOptions& options) {
  const std::size_t n = e.n();
  if (y0.n() != n) throw Error(ErrorKind::DimensionMismatch, "y0 vs ellipsoid");
  const OrthoMatrix u0 = barycentric_basis(y0);
  const bool edge = target == FunctionalKind::EdgeLength;
  const bool can_move = edge ? n >= 2 : n >= 3;
  const Matrix& m = edge ? e.A().matrix() : e.C().matrix();

  RshReport report;
  report.target = target;
  report.U = u0;
  report.residual = rsh_residual(e, y0, target, u0);
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);

  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(stream_seed(options.seed, r));
    Matrix u = u0.matrix();
    if (r > 0 && can_move) {
      if (edge) {
        u = random_orthogonal(n, rng).matrix();
      } else {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        for (std::size_t k = 0; k < n * n; ++k)
          u = u * rotation_about_ones_axis(n, random_triple(n, rng, angle(rng))).matrix();
      }
    }
    double res = restricted_schur_horn_residual(m, y0, u);
    for (std::size_t k = 0; k < options.iters && can_move && res > 0.0; ++k) {
      const double step = annealed_step(k, options.iters);
      Matrix cand = edge ? random_plane_rotation(u, rng, step) : random_stabilizer_rotation(u, rng, step);
      const double cres = restricted_schur_horn_residual(m, y0, cand);
      if (cres < res) {
        u = std::move(cand);
        res = cres;
      }
    }
    ++report.restarts;
    if (res < report.residual || r == 0) {
      report.residual = res;
      report.U = OrthoMatrix(orthonormalize_columns(u));
      report.best_restart = r;
    }
  }
  report.residual = rsh_residual(e, y0, target, report.U);
  report.descent_residual = report.residual;

  if (options.polish && can_move) {
    OrthoMatrix polished = report.U;
    if (edge) {
      polished = solve_restricted_schur_horn(e.A().sym(), y0, report.U, 1e-15).U;
    } else {
      const SymMatrix local(u0.matrix().transposed() * m * u0.matrix());
      const OrthoMatrix v(u0.matrix().transposed() * report.U.matrix(), 1e-8);
      polished = u0 * stabilizer_descent(local, v, 1e-15);
    }
    const double pres = rsh_residual(e, y0, target, polished);
    if (pres < report.residual) {
      report.residual = pres;
      report.U = std::move(polished);
    }
  }
  return report;
}

StationarityReport stationarity_check(const Ellipsoid& e, const SphereOrthotope& q,
                                      FunctionalKind kind, double h) {
  const std::size_t n = q.n();
  StationarityReport report;
  auto value = [&](const Matrix& u, const Vector& lambda) {
    return evaluate(kind, e, SphereOrthotope(OrthoMatrix(u), lambda)).value;
  };

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t r = p + 1; r < n; ++r) {
      Matrix plus = q.U().matrix();
      Matrix minus = q.U().matrix();
      rotate_columns(plus, p, r, std::cos(h), std::sin(h));
      rotate_columns(minus, p, r, std::cos(h), -std::sin(h));
      const double d = (value(plus, q.lambda()) - value(minus, q.lambda())) / (2.0 * h);
      report.frame = std::max(report.frame, std::abs(d));
    }
  }

  // tangent direction e_k − (λ_k/4)λ, retracted back to radius 2
  auto retract = [](Vector l) {
    const double s = 2.0 / norm(l);
    for (double& x : l) x *= s;
    return l;
  };
  for (std::size_t k = 0; k < n && n > 1; ++k) {
    Vector t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = (i == k ? 1.0 : 0.0) - q.lambda()[i] * q.lambda()[k] / 4.0;
    const double tn = norm(t);
    if (tn < 1e-12) continue;
    Vector plus(n);
    Vector minus(n);
    for (std::size_t i = 0; i < n; ++i) {
      plus[i] = q.lambda()[i] + h * t[i] / tn;
      minus[i] = q.lambda()[i] - h * t[i] / tn;
    }
    const double d =
        (value(q.U().matrix(), retract(plus)) - value(q.U().matrix(), retract(minus))) / (2.0 * h);
    report.lambda = std::max(report.lambda, std::abs(d));
  }
  report.max = std::max(report.frame, report.lambda);
  return report;
}

TangentNormals tangent_normals_dump(const Ellipsoid& e, const Parallelepiped& p) {
  const InscribedReport ins = is_inscribed(e, p);
  if (!ins.inscribed) {
    std::ostringstream os;
    os << "parallelepiped is not inscribed (max vertex residual " << ins.max_residual << ")";
    throw Error(ErrorKind::NotInscribed, os.str());
  }
  TangentNormals out;
  out.vertices = vertices(p);
  for (const Vector& x : out.vertices) {
    Vector nrm = e.C().matrix() * x;
    const double s = norm(nrm);
    for (double& v : nrm) v /= s;
    out.normals.push_back(std::move(nrm));
  }
  const std::size_t m = out.normals.size();
  out.gram = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.gram(i, j) = dot(out.normals[i], out.normals[j]);
  return out;
}

}  // namespace inscribed
