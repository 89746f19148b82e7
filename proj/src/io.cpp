#include "quasifree/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qf::io {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("input: " + msg);
}

Complex parse_entry(const Json& e, const char* name) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return Complex(e[0].get<double>(), e[1].get<double>());
  }
  fail(std::string(name) + ": matrix entries must be numbers or [re, im] pairs");
}

MatrixXcd parse_matrix(const Json& j, int n, const char* name, bool real_only) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    fail(std::string(name) + ": expected " + std::to_string(n) + " rows");
  }
  MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) {
      fail(std::string(name) + ": expected " + std::to_string(n) + " columns per row");
    }
    for (int c = 0; c < n; ++c) {
      m(r, c) = parse_entry(j[r][c], name);
      if (real_only && m(r, c).imag() != 0.0) {
        fail(std::string(name) + ": entries must be real in the pq basis");
      }
    }
  }
  return m;
}

Json parsed(const std::string& text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail("not valid JSON");
  return j;
}

}  // namespace

Generator HamiltonianFile::generator() const {
  return pq ? generator_pq(*pq) : generator_aa(*aa);
}

HamiltonianFile parse_hamiltonian(const std::string& text) {
  const Json j = parsed(text);
  if (!j.is_object()) fail("hamiltonian document must be an object");
  if (!j.contains("basis") || !j["basis"].is_string()) fail("missing string field 'basis'");
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() <= 0) {
    fail("missing positive integer field 'n'");
  }
  const int n = j["n"].get<int>();
  const std::string basis = j["basis"].get<std::string>();
  HamiltonianFile out;
  if (basis == "pq") {
    for (const char* name : {"M", "L", "K"}) {
      if (!j.contains(name)) fail(std::string("pq hamiltonian needs field '") + name + "'");
    }
    out.pq.emplace(parse_matrix(j["M"], n, "M", true).real(),
                   parse_matrix(j["L"], n, "L", true).real(),
                   parse_matrix(j["K"], n, "K", true).real());
  } else if (basis == "aa") {
    for (const char* name : {"S", "T"}) {
      if (!j.contains(name)) fail(std::string("aa hamiltonian needs field '") + name + "'");
    }
    out.aa.emplace(parse_matrix(j["S"], n, "S", false), parse_matrix(j["T"], n, "T", false));
  } else {
    fail("basis must be \"pq\" or \"aa\"");
  }
  return out;
}

HamiltonianFile load_hamiltonian(const std::string& path) {
  return parse_hamiltonian(read_file(path));
}

DispersionGrid parse_grid(const std::string& text) {
  const Json j = parsed(text);
  if (!j.is_object() || !j.contains("modes") || !j["modes"].is_array()) {
    fail("grid document must be an object with a 'modes' array");
  }
  int global_eps = +1;
  if (j.contains("epsilon")) {
    if (!j["epsilon"].is_number_integer()) fail("'epsilon' must be +1 or -1");
    global_eps = j["epsilon"].get<int>();
  }
  std::vector<ModeRecord> records;
  for (const auto& m : j["modes"]) {
    if (!m.is_object() || !m.contains("p") || !m.contains("omega") || !m.contains("delta")) {
      fail("each mode needs numeric fields 'p', 'omega', 'delta'");
    }
    ModeRecord rec;
    rec.p = m["p"].get<double>();
    rec.omega = m["omega"].get<double>();
    rec.delta = m["delta"].get<double>();
    if (m.contains("epsilon")) rec.epsilon = m["epsilon"].get<int>();
    records.push_back(rec);
  }
  return DispersionGrid(std::move(records), global_eps);
}

DispersionGrid load_grid(const std::string& path) { return parse_grid(read_file(path)); }

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json real_matrix_json(const MatrixXd& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json matrix_json(const MatrixXcd& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const VectorXd& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json ext_real_json(const ExtReal& x) {
  if (x.is_inf()) return Json("inf");
  return Json(x.finite());
}

Json form_json(const ExtendedQuadraticForm& q) {
  Json out;
  out["basis"] = to_string(q.basis());
  out["R"] = matrix_json(q.r());
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qf::io
