#include "inscribed/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "inscribed/error.hpp"

namespace inscribed {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::ParseError, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::ParseError, "cannot replace '" + path + "'");
  }
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

namespace {

double number(const Json& j, const char* where) {
  if (!j.is_number()) throw Error(ErrorKind::ParseError, std::string(where) + ": expected a number");
  return j.get<double>();
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorKind::ParseError, std::string("missing field \"") + name + "\"");
  }
  return j.at(name);
}

std::size_t declared_n(const Json& j) {
  const Json& n = field(j, "n");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    throw Error(ErrorKind::ParseError, "\"n\" must be a positive integer");
  }
  return n.get<std::size_t>();
}

std::vector<std::vector<double>> rows_of(const Json& data, std::size_t n, const char* what) {
  if (!data.is_array() || data.size() != n) {
    throw Error(ErrorKind::ParseError, std::string(what) + " must hold n arrays");
  }
  std::vector<std::vector<double>> rows;
  for (const Json& row : data) {
    if (!row.is_array() || row.size() != n) {
      throw Error(ErrorKind::ParseError, std::string(what) + " rows must have n entries");
    }
    std::vector<double> r;
    for (const Json& x : row) r.push_back(number(x, what));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

Matrix matrix_from_json(const Json& j) {
  const std::size_t n = declared_n(j);
  return Matrix::from_rows(rows_of(field(j, "data"), n, "\"data\""));
}

Vector vector_from_json(const Json& j) {
  const std::size_t n = declared_n(j);
  const Json& data = field(j, "data");
  if (!data.is_array() || data.size() != n) {
    throw Error(ErrorKind::ParseError, "\"data\" must hold n numbers");
  }
  Vector v;
  for (const Json& x : data) v.push_back(number(x, "\"data\""));
  return v;
}

Matrix edges_from_json(const Json& j) {
  const std::size_t n = declared_n(j);
  return Matrix::from_columns(rows_of(field(j, "edges"), n, "\"edges\""));
}

Json to_json(const Matrix& m) { return Json(m.to_rows()); }

Json to_json(const Vector& v) { return Json(v); }

Json matrix_file_json(const Matrix& m) {
  Json j;
  j["n"] = m.rows();
  j["data"] = to_json(m);
  return j;
}

Json vector_file_json(const Vector& v) {
  Json j;
  j["n"] = v.size();
  j["data"] = v;
  return j;
}

Json to_json(const SphereOrthotope& q) {
  Json j;
  j["U"] = to_json(q.U().matrix());
  j["lambda"] = q.lambda();
  return j;
}

Json to_json(const Parallelepiped& p) {
  Json j;
  j["n"] = p.n();
  Json edges = Json::array();
  for (std::size_t i = 0; i < p.n(); ++i) edges.push_back(p.edge(i));
  j["edges"] = std::move(edges);
  return j;
}

Json to_json(const FunctionalValue& v) {
  Json j;
  j["functional"] = std::string(to_string(v.kind));
  j["value"] = v.value;
  j["condition"] = v.condition;
  return j;
}

Json to_json(const ExtremalCertificate& c) {
  Json j;
  j["route"] = c.route;
  j["achieved"] = to_json(c.achieved);
  j["bound"] = c.bound;
  j["relative_gap"] = c.relative_gap;
  Json res = Json::object();
  for (const auto& [k, v] : c.equality_residuals) res[k] = v;
  j["equality_residuals"] = std::move(res);
  return j;
}

Json to_json(const Construction& c) {
  Json j;
  j["orthotope"] = to_json(c.orthotope);
  j["parallelepiped"] = to_json(c.parallelepiped);
  j["certificate"] = to_json(c.certificate);
  return j;
}

Json to_json(const EqualizationReport& r) {
  Json j;
  j["converged"] = r.converged;
  j["V"] = to_json(r.V.matrix());
  j["iterations"] = r.iterations;
  j["rotations"] = r.rotations;
  j["final_psi"] = r.final_psi;
  j["max_diag_residual"] = r.max_diag_residual;
  j["tol"] = r.tol;
  j["restarts"] = r.restarts;
  j["pairwise_steps"] = r.pairwise_steps;
  j["gauss_newton_steps"] = r.gauss_newton_steps;
  j["variance_history"] = r.variance_history;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

Json to_json(const SearchReport& r) {
  Json j;
  j["functional"] = std::string(to_string(r.kind));
  j["trials"] = r.trials;
  j["skipped"] = r.skipped;
  j["best_value"] = r.best_value;
  j["bound"] = r.bound;
  j["best_gap"] = r.best_gap;
  j["best_trial"] = r.best_trial;
  j["violations"] = r.violations;
  j["worst_excess"] = r.worst_excess;
  j["best_config"] = r.best_config ? to_json(*r.best_config) : Json(nullptr);
  return j;
}

Json to_json(const RshReport& r) {
  Json j;
  j["target"] = std::string(to_string(r.target));
  j["residual"] = r.residual;
  j["descent_residual"] = r.descent_residual;
  j["restarts"] = r.restarts;
  j["best_restart"] = r.best_restart;
  j["U"] = to_json(r.U.matrix());
  return j;
}

Json to_json(const ToleranceConfig& t) {
  Json j;
  j["ortho_tol"] = t.ortho_tol;
  j["inscribed_tol"] = t.inscribed_tol;
  j["equalizer_tol"] = t.equalizer_tol;
  j["bound_slack"] = t.bound_slack;
  return j;
}

}  // namespace inscribed
