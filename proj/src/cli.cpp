#include "inscribed/cli.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "inscribed/error.hpp"
#include "inscribed/json_io.hpp"

namespace inscribed {

namespace {

struct Args {
  std::string matrix;
  std::string vertex;
  std::string y0;
  std::string parallelepiped;
  std::string functional = "facet";
  std::string output;
  std::string csv_trace;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::size_t max_iter = 0;
  std::size_t restarts = 4;
  std::size_t iters = 2000;
  bool barycentric = false;
  ToleranceConfig tol;
};

struct Input {
  std::string role;
  std::string path;
  std::string text;
};

class Runner {
 public:
  Runner(std::string command, std::vector<std::string> argv, const Args& args, bool seeded,
         std::ostream& out)
      : command_(std::move(command)), argv_(std::move(argv)), args_(args), seeded_(seeded), out_(out) {}

  const std::string& load(const std::string& role, const std::string& path) {
    inputs_.push_back({role, path, read_text_file(path)});
    return inputs_.back().text;
  }

  Json manifest() const {
    Json m;
    m["command"] = command_;
    m["argv"] = argv_;
    Json inputs = Json::array();
    for (const Input& in : inputs_) {
      inputs.push_back({{"role", in.role}, {"path", in.path}, {"fnv1a64", fnv1a64_hex(in.text)}});
    }
    m["inputs"] = std::move(inputs);
    m["seed"] = seeded_ ? Json(args_.seed) : Json(nullptr);
    m["tolerances"] = to_json(args_.tol);
    m["version"] = kVersion;
    return m;
  }

  // Wraps the payload with schema and manifest and writes it.
  void emit(Json payload) const {
    Json doc;
    doc["schema"] = kSchema;
    doc["command"] = command_;
    for (auto& [k, v] : payload.items()) doc[k] = std::move(v);
    doc["manifest"] = manifest();
    const std::string text = doc.dump(2) + "\n";
    if (args_.output.empty()) {
      out_ << text;
    } else {
      write_file_atomically(args_.output, text);
    }
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  const Args& args_;
  bool seeded_;
  std::ostream& out_;
  std::vector<Input> inputs_;
};

Ellipsoid load_ellipsoid(Runner& run, const std::string& path) {
  const Matrix a = matrix_from_json(parse_json(run.load("matrix", path)));
  return Ellipsoid(SpdMatrix(SymMatrix::checked(a)));
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotConverged:
    case ErrorKind::UnsupportedCase:
    case ErrorKind::DegenerateVertex:
      return kExitNotAttained;
    default:
      return kExitValidation;
  }
}

std::string status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotConverged:
      return "not_converged";
    case ErrorKind::UnsupportedCase:
      return "unsupported";
    default:
      return "degenerate";
  }
}

int cmd_bounds(Runner& run, const Args& args) {
  const Ellipsoid e = load_ellipsoid(run, args.matrix);
  Json j;
  j["n"] = e.n();
  j["L_max"] = bound_L_max(e);
  j["S_max"] = bound_S_max(e);
  j["tr_A"] = e.A().matrix().trace();
  j["tr_C"] = e.C().matrix().trace();
  j["det_A"] = e.A().determinant();
  run.emit(std::move(j));
  return kExitOk;
}

int cmd_construct(Runner& run, const Args& args) {
  const Ellipsoid e = load_ellipsoid(run, args.matrix);
  const FunctionalKind kind = parse_functional(args.functional);
  std::optional<Vector> x0;
  if (!args.vertex.empty()) x0 = vector_from_json(parse_json(run.load("vertex", args.vertex)));

  try {
    Construction c = [&] {
      if (!x0) {
        return kind == FunctionalKind::EdgeLength ? construct_L_max(e, std::nullopt, args.seed)
                                                  : construct_S_max(e);
      }
      VertexOptions vo;
      vo.tol = args.tol.equalizer_tol;
      vo.seed = args.seed;
      vo.boundary_tol = args.tol.inscribed_tol;
      return construct_through_vertex(e, *x0, kind, vo);
    }();
    Json j = to_json(c);
    j["status"] = "ok";
    run.emit(std::move(j));
    return kExitOk;
  } catch (const Error& err) {
    if (exit_code_for(err.kind()) != kExitNotAttained) throw;
    Json j;
    j["status"] = status_for(err.kind());
    j["error"] = err.what();
    run.emit(std::move(j));
    return kExitNotAttained;
  }
}

int cmd_verify(Runner& run, const Args& args) {
  const Ellipsoid e = load_ellipsoid(run, args.matrix);
  const Parallelepiped p(edges_from_json(parse_json(run.load("parallelepiped", args.parallelepiped))));
  if (p.n() != e.n()) throw Error(ErrorKind::DimensionMismatch, "parallelepiped vs matrix");

  const InscribedReport ins = is_inscribed(e, p, args.tol.inscribed_tol);
  const double l = edge_length_total(p).value;
  const double s = facet_area_total_gram(p).value;
  const double lmax = bound_L_max(e);
  const double smax = bound_S_max(e);
  Json j;
  j["inscribed"] = {{"inscribed", ins.inscribed}, {"max_residual", ins.max_residual}};
  try {
    parallelepiped_to_orthotope(e, p, args.tol.inscribed_tol);
    j["orthotope"] = {{"orthotope", true}};
  } catch (const Error& err) {
    j["orthotope"] = {{"orthotope", false}, {"reason", err.what()}};
  }
  j["L"] = l;
  j["S"] = s;
  j["L_max"] = lmax;
  j["S_max"] = smax;
  j["L_gap"] = (lmax - l) / lmax;
  j["S_gap"] = (smax - s) / smax;
  run.emit(std::move(j));
  return kExitOk;
}

int cmd_search(Runner& run, const Args& args) {
  const Ellipsoid e = load_ellipsoid(run, args.matrix);
  const FunctionalKind kind = parse_functional(args.functional);
  if (args.trials == 0) throw Error(ErrorKind::NonPositiveInput, "--trials must be >= 1");
  SearchOptions so;
  so.trials = args.trials;
  so.seed = args.seed;
  so.slack = args.tol.bound_slack;
  so.record_trace = !args.csv_trace.empty();
  so.boundary_tol = args.tol.inscribed_tol;

  SearchReport report;
  if (args.vertex.empty()) {
    report = random_search_global(e, kind, so);
  } else {
    const Vector x0 = vector_from_json(parse_json(run.load("vertex", args.vertex)));
    report = random_search_vertex(e, x0, kind, so);
  }
  if (!args.csv_trace.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "trial,value\n";
    for (std::size_t i = 0; i < report.trace.size(); ++i) csv << i << ',' << report.trace[i] << '\n';
    write_file_atomically(args.csv_trace, csv.str());
  }
  Json j = to_json(report);
  j["vertex_constrained"] = !args.vertex.empty();
  run.emit(std::move(j));
  return report.violations > 0 ? kExitBoundViolation : kExitOk;
}

int cmd_equalize(Runner& run, const Args& args) {
  const SymMatrix m = SymMatrix::checked(matrix_from_json(parse_json(run.load("matrix", args.matrix))));
  EqualizationReport report;
  if (args.barycentric) {
    BarycentricOptions bo;
    bo.tol = args.tol.equalizer_tol;
    bo.max_iter = args.max_iter;
    bo.seed = args.seed;
    report = equalize_diagonal_barycentric(m, bo);
  } else {
    report = equalize_diagonal(m, args.tol.equalizer_tol);
  }
  Json j = to_json(report);
  j["barycentric"] = args.barycentric;
  if (args.barycentric) {
    const Vector ones(m.n(), 1.0);
    const Vector v1 = report.V.matrix() * ones;
    double dev = 0.0;
    for (double x : v1) dev = std::max(dev, std::abs(x - 1.0));
    j["fixes_ones_residual"] = dev;
  }
  run.emit(std::move(j));
  return report.converged ? kExitOk : kExitNotAttained;
}

int cmd_explore_rsh(Runner& run, const Args& args) {
  const Ellipsoid e = load_ellipsoid(run, args.matrix);
  const FunctionalKind kind = parse_functional(args.functional);
  const UnitVector y0(vector_from_json(parse_json(run.load("y0", args.y0))), args.tol.ortho_tol);
  RshOptions ro;
  ro.restarts = args.restarts;
  ro.iters = args.iters;
  ro.seed = args.seed;
  Json j = to_json(explore_restricted_schur_horn(e, y0, kind, ro));
  j["y0_is_eigenvector"] = is_eigenvector(e.C(), y0);
  run.emit(std::move(j));
  return kExitOk;
}

bool ci_mode() {
  const char* v = std::getenv("INSCRIBED_EXTREMA_CI");
  return v != nullptr && std::string(v) == "1";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Args args;
  CLI::App app{"Extremal parallelepipeds inscribed in ellipsoids", "inscribed_extrema"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto add_tolerances = [&](CLI::App* sub) {
    sub->add_option("--tol-ortho", args.tol.ortho_tol, "orthonormality tolerance");
    sub->add_option("--tol-inscribed", args.tol.inscribed_tol, "vertex residual tolerance");
    sub->add_option("--tol-equalizer", args.tol.equalizer_tol, "diagonal equalization tolerance");
    sub->add_option("--bound-slack", args.tol.bound_slack, "relative slack before a bound violation");
    sub->add_option("--output", args.output, "write JSON here atomically instead of stdout");
  };
  auto add_matrix = [&](CLI::App* sub) {
    sub->add_option("--matrix", args.matrix, "SPD matrix file {\"n\", \"data\"}")->required();
  };
  auto add_functional = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--functional,--target", args.functional, "edge | facet")
                    ->check(CLI::IsMember({"edge", "facet", "edge_length", "facet_area"}));
    if (required) opt->required();
  };

  CLI::App* bounds = app.add_subcommand("bounds", "closed-form maxima of L and S");
  add_matrix(bounds);
  add_tolerances(bounds);

  CLI::App* construct = app.add_subcommand("construct", "build a maximizing parallelepiped");
  add_matrix(construct);
  add_functional(construct, true);
  construct->add_option("--vertex", args.vertex, "boundary point the all-plus vertex must hit");
  CLI::Option* construct_seed = construct->add_option("--seed", args.seed);
  add_tolerances(construct);

  CLI::App* verify = app.add_subcommand("verify", "check a parallelepiped against the bounds");
  add_matrix(verify);
  verify->add_option("--parallelepiped", args.parallelepiped, "file {\"n\", \"edges\"}")->required();
  add_tolerances(verify);

  CLI::App* search = app.add_subcommand("search", "random search against the bounds");
  add_matrix(search);
  add_functional(search, true);
  search->add_option("--trials", args.trials);
  search->add_option("--vertex", args.vertex);
  search->add_option("--csv-trace", args.csv_trace, "write trial,value rows here");
  CLI::Option* search_seed = search->add_option("--seed", args.seed);
  add_tolerances(search);

  CLI::App* equalize = app.add_subcommand("equalize", "equalize the diagonal of a symmetric matrix");
  add_matrix(equalize);
  equalize->add_flag("--barycentric", args.barycentric, "stay inside the stabilizer of 1");
  equalize->add_option("--max-iter", args.max_iter);
  CLI::Option* equalize_seed = equalize->add_option("--seed", args.seed);
  add_tolerances(equalize);

  CLI::App* explore = app.add_subcommand("explore-rsh", "search frames for the restricted diagonal condition");
  add_matrix(explore);
  add_functional(explore, true);
  explore->add_option("--y0", args.y0, "unit vector file")->required();
  explore->add_option("--restarts", args.restarts);
  explore->add_option("--iters", args.iters);
  CLI::Option* explore_seed = explore->add_option("--seed", args.seed);
  add_tolerances(explore);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const bool seeded = (construct_seed->count() + search_seed->count() + equalize_seed->count() +
                       explore_seed->count()) > 0;
  const bool randomized =
      name == "search" || name == "explore-rsh" || (name == "equalize" && args.barycentric) ||
      (name == "construct" && (!args.vertex.empty() || parse_functional(args.functional) ==
                                                           FunctionalKind::EdgeLength));
  if (ci_mode() && randomized && !seeded) {
    err << "error: " << name << " is randomized; INSCRIBED_EXTREMA_CI=1 requires --seed\n";
    return kExitValidation;
  }
  if (!args.tol.valid()) {
    err << "error: tolerances must be positive\n";
    return kExitValidation;
  }

  std::vector<std::string> argv_copy(argv + 1, argv + argc);
  Runner run(name, std::move(argv_copy), args, seeded, out);
  try {
    if (name == "bounds") return cmd_bounds(run, args);
    if (name == "construct") return cmd_construct(run, args);
    if (name == "verify") return cmd_verify(run, args);
    if (name == "search") return cmd_search(run, args);
    if (name == "equalize") return cmd_equalize(run, args);
    return cmd_explore_rsh(run, args);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace inscribed
