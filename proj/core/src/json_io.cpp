#include "steering/json_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace steering {

using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains(field))
    throw std::invalid_argument("missing field '" + field + "'");
  return j.at(field);
}

void require_schema(const json& j, const std::string& want) {
  const auto& s = require(j, "schema");
  if (!s.is_string() || s.get<std::string>() != want)
    throw std::invalid_argument("field 'schema' must be \"" + want + "\"");
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("field '" + field + "' must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
  if (cols == 0) throw std::invalid_argument("field '" + field + "' has an empty first row");
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || row.size() != cols)
      throw std::invalid_argument("field '" + field + "' row " + std::to_string(r) +
                                  " has inconsistent length");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& ent = row.at(c);
      if (!ent.is_array() || ent.size() != 2 || !ent.at(0).is_number() || !ent.at(1).is_number())
        throw std::invalid_argument("field '" + field + "' entry (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") must be an [re, im] pair");
      m(r, c) = Complex(ent.at(0).get<double>(), ent.at(1).get<double>());
    }
  }
  if (!m.is_finite()) throw std::invalid_argument("field '" + field + "' has non-finite entries");
  return m;
}

json state_to_json(const DensityOperator& rho) {
  json j;
  j["schema"] = "steering/state-v1";
  if (rho.bipartite())
    j["dims"] = json::array({rho.dim_a(), rho.dim_b()});
  else
    j["dims"] = json::array({rho.dim()});
  j["matrix"] = matrix_to_json(rho.op().matrix());
  return j;
}

DensityOperator state_from_json(const json& j) {
  require_schema(j, "steering/state-v1");
  const auto& dims = require(j, "dims");
  if (!dims.is_array() || dims.empty() || dims.size() > 2)
    throw std::invalid_argument("field 'dims' must hold one or two dimensions");
  const ComplexMatrix m = matrix_from_json(require(j, "matrix"), "matrix");
  HermitianOperator op(m, 1e-9);
  if (dims.size() == 2)
    return DensityOperator(std::move(op), dims.at(0).get<std::size_t>(),
                           dims.at(1).get<std::size_t>());
  return DensityOperator(std::move(op), dims.at(0).get<std::size_t>());
}

json assemblage_to_json(const Assemblage& e) {
  json j;
  j["schema"] = "steering/assemblage-v1";
  j["m"] = e.settings();
  j["n"] = e.outcomes();
  j["d"] = e.dim();
  json members = json::array();
  for (std::size_t x = 1; x <= e.settings(); ++x)
    for (std::size_t a = 1; a <= e.outcomes(); ++a) {
      json mem;
      mem["a"] = a;
      mem["x"] = x;
      mem["matrix"] = matrix_to_json(e.member(a, x).matrix());
      members.push_back(std::move(mem));
    }
  j["members"] = std::move(members);
  return j;
}

Assemblage assemblage_from_json(const json& j) {
  require_schema(j, "steering/assemblage-v1");
  const std::size_t m = require(j, "m").get<std::size_t>();
  const std::size_t n = require(j, "n").get<std::size_t>();
  const std::size_t d = require(j, "d").get<std::size_t>();
  const auto& members = require(j, "members");
  if (!members.is_array() || members.size() != m * n)
    throw std::invalid_argument("field 'members' must hold m*n entries");
  std::vector<HermitianOperator> ops(m * n, HermitianOperator::zero(d));
  std::vector<bool> seen(m * n, false);
  for (const auto& mem : members) {
    const std::size_t a = require(mem, "a").get<std::size_t>();
    const std::size_t x = require(mem, "x").get<std::size_t>();
    if (a < 1 || a > n) throw std::invalid_argument("field 'a' out of range in members");
    if (x < 1 || x > m) throw std::invalid_argument("field 'x' out of range in members");
    const std::size_t idx = (x - 1) * n + (a - 1);
    if (seen[idx]) throw std::invalid_argument("duplicate member (a, x) in 'members'");
    seen[idx] = true;
    const ComplexMatrix mat = matrix_from_json(require(mem, "matrix"), "members.matrix");
    if (mat.rows() != d)
      throw std::invalid_argument("field 'members.matrix' dimension disagrees with 'd'");
    ops[idx] = HermitianOperator(mat, 1e-9);
  }
  return Assemblage(m, n, d, std::move(ops));
}

json functional_to_json(const SteeringFunctional& z) {
  json ops;
  ops["Z13"] = matrix_to_json(z.z13.matrix());
  ops["Z23"] = matrix_to_json(z.z23.matrix());
  ops["Z31"] = matrix_to_json(z.z31.matrix());
  ops["Z32"] = matrix_to_json(z.z32.matrix());
  ops["Z33"] = matrix_to_json(z.z33.matrix());
  json j;
  j["schema"] = "steering/functional-v1";
  j["operators"] = std::move(ops);
  if (z.family_x) j["x"] = *z.family_x;
  return j;
}

SteeringFunctional functional_from_json(const json& j) {
  require_schema(j, "steering/functional-v1");
  const auto& ops = require(j, "operators");
  auto get = [&](const char* name) {
    return HermitianOperator(matrix_from_json(require(ops, name), std::string("operators.") + name),
                             1e-9);
  };
  SteeringFunctional z{get("Z13"), get("Z23"), get("Z31"), get("Z32"), get("Z33"), std::nullopt};
  if (j.contains("x")) z.family_x = j.at("x").get<double>();
  return z;
}

json search_result_to_json(const SearchResult& r) {
  json j;
  j["schema"] = "steering/search-result-v1";
  j["status"] = (r.status == SearchStatus::violation_found) ? "violation_found" : "no_violation_found";
  if (r.status == SearchStatus::violation_found)
    j["best_C"] = r.best_c;
  else
    j["best_C"] = nullptr;
  if (r.best_state) j["best_state"] = state_to_json(*r.best_state);
  if (r.best_functional) j["best_functional"] = functional_to_json(*r.best_functional);
  json trace = json::array();
  for (const auto& t : r.trace) {
    json e;
    e["restart"] = t.restart;
    e["round"] = t.round;
    e["phase"] = t.phase;
    e["C"] = t.c;
    trace.push_back(std::move(e));
  }
  j["trace"] = std::move(trace);
  j["restarts_used"] = r.restarts_used;
  return j;
}

json counterexample_report_to_json(const CounterexampleReport& rep) {
  json j;
  j["schema"] = "steering/counterexample-report-v1";
  j["x"] = rep.params.x;
  j["m1"] = rep.params.m1;
  j["m2"] = rep.params.m2;
  j["epsilon"] = rep.epsilon;
  json margins;
  for (const auto& c : rep.functional_margins) margins[c.name] = c.min_eigenvalue;
  j["functional_margins"] = std::move(margins);
  j["state_min_eigenvalue"] = rep.state_min_eig;
  j["ppt_min_eigenvalue"] = rep.ppt_min_eig;
  j["C"] = rep.c_value;
  j["verdict"] = rep.verdict ? "bound entangled and steerable" : "not verified";
  return j;
}

json dump_problem(const SdpProblem& p) {
  json j;
  j["schema"] = "steering/sdp-problem-v1";
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back({{"id", b.id}, {"dim", b.dim}});
  j["blocks"] = std::move(blocks);
  j["scalar_vars"] = p.scalar_vars;
  auto coeffs_json = [](const std::vector<BlockCoeff>& cs) {
    json arr = json::array();
    for (const auto& c : cs)
      arr.push_back({{"block", c.block}, {"matrix", matrix_to_json(c.op.matrix())}});
    return arr;
  };
  j["objective"] = {{"blocks", coeffs_json(p.objective.coeffs)},
                    {"scalars", p.objective.scalar_coeffs}};
  json cons = json::array();
  for (const auto& con : p.constraints)
    cons.push_back({{"blocks", coeffs_json(con.coeffs)},
                    {"scalars", con.scalar_coeffs},
                    {"rhs", con.rhs}});
  j["constraints"] = std::move(cons);
  return j;
}

std::string scan_to_csv(const ScanTable& table) {
  std::ostringstream out;
  out << "x,m1,m2,C,valid\n";
  char buf[128];
  for (const auto& row : table.rows) {
    if (row.valid)
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,1\n", row.x, row.m1, row.m2, row.c);
    else
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,nan,0\n", row.x, row.m1, row.m2);
    out << buf;
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  fs::create_directories(dir);
  const fs::path tmp = dir / (target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open temp file for: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write for: " + path);
  }
  fs::rename(tmp, target);
}

}  // namespace steering
