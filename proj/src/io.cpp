#include "distil/io.hpp"

#include "distil/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace distil::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DocumentError("at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

double parse_number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "number is not finite");
  return v;
}

std::size_t parse_count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0) fail(where, "expected a positive integer");
  return j.get<std::size_t>();
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) fail(where + "/" + item.key(), "unknown field");
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(where, "missing field '" + key + "'");
  return j.at(key);
}

void check_version(const Json& j) {
  const Json& v = require(j, "schema_version", "");
  if (!v.is_string()) fail("/schema_version", "expected a string");
  if (v.get<std::string>() != kSchemaVersion)
    fail("/schema_version", "unsupported version '" + v.get<std::string>() + "', expected " + kSchemaVersion);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::ostringstream os;
    os << "syntax error at byte " << e.byte << ": " << e.what();
    throw DocumentError(os.str());
  }
}

void check_valid(const ValidationReport& report, const char* what) {
  if (!report.empty()) throw ValidationFailure(std::string(what) + " is invalid:\n" + describe(report));
}

}  // namespace

std::string to_string(AssemblageDocument::Kind kind) {
  return kind == AssemblageDocument::Kind::State ? "state" : "measurement";
}

AssemblageDocument AssemblageDocument::from(const StateAssemblage& sigma) {
  return AssemblageDocument{Kind::State, sigma.elements(), std::nullopt};
}

AssemblageDocument AssemblageDocument::from(const MeasurementAssemblage& e) {
  return AssemblageDocument{Kind::Measurement, e.elements(), e.carrier()};
}

StateAssemblage AssemblageDocument::state() const {
  if (kind != Kind::State) throw ValidationFailure("expected a state assemblage, got a measurement assemblage");
  StateAssemblage sigma(elements);
  check_valid(validate_state_assemblage(sigma), "state assemblage");
  return sigma;
}

MeasurementAssemblage AssemblageDocument::measurement() const {
  if (kind != Kind::Measurement) throw ValidationFailure("expected a measurement assemblage, got a state assemblage");
  const Eigen::Index d = elements.front().front().rows();
  MeasurementAssemblage e(elements, carrier ? *carrier : identity(d));
  check_valid(validate_measurement_assemblage(e), "measurement assemblage");
  return e;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json elements_json(const Elements& elements) {
  Json out = Json::array();
  for (const auto& per_x : elements) {
    Json row = Json::array();
    for (const Matrix& m : per_x) row.push_back(matrix_json(m));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix parse_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  const std::size_t n = j.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const std::string rw = where + "/" + std::to_string(r);
    const Json& row = j[r];
    if (!row.is_array() || row.size() != n) fail(rw, "expected a row of " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      const std::string cw = rw + "/" + std::to_string(c);
      const Json& z = row[c];
      if (!z.is_array() || z.size() != 2) fail(cw, "expected an [re, im] pair");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(parse_number(z[0], cw + "/0"), parse_number(z[1], cw + "/1"));
    }
  }
  return m;
}

Elements parse_elements(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array indexed by input");
  Elements out;
  for (std::size_t x = 0; x < j.size(); ++x) {
    const std::string xw = where + "/" + std::to_string(x);
    if (!j[x].is_array() || j[x].empty()) fail(xw, "expected a non-empty array indexed by outcome");
    std::vector<Matrix> row;
    for (std::size_t a = 0; a < j[x].size(); ++a) row.push_back(parse_matrix(j[x][a], xw + "/" + std::to_string(a)));
    out.push_back(std::move(row));
  }
  return out;
}

AssemblageDocument parse_assemblage(const std::string& text) {
  const Json j = parse_json(text);
  reject_unknown(j, {"schema_version", "kind", "dim", "n_inputs", "n_outputs", "elements", "carrier"}, "");
  check_version(j);
  AssemblageDocument doc;
  const Json& kind = require(j, "kind", "");
  if (kind == "state")
    doc.kind = AssemblageDocument::Kind::State;
  else if (kind == "measurement")
    doc.kind = AssemblageDocument::Kind::Measurement;
  else
    fail("/kind", "expected \"state\" or \"measurement\"");
  const std::size_t dim = parse_count(require(j, "dim", ""), "/dim");
  const std::size_t n_in = parse_count(require(j, "n_inputs", ""), "/n_inputs");
  const std::size_t n_out = parse_count(require(j, "n_outputs", ""), "/n_outputs");
  doc.elements = parse_elements(require(j, "elements", ""), "/elements");
  if (doc.elements.size() != n_in)
    fail("/elements", "has " + std::to_string(doc.elements.size()) + " inputs, n_inputs is " + std::to_string(n_in));
  for (std::size_t x = 0; x < n_in; ++x) {
    const std::string xw = "/elements/" + std::to_string(x);
    if (doc.elements[x].size() != n_out)
      fail(xw, "has " + std::to_string(doc.elements[x].size()) + " outcomes, n_outputs is " + std::to_string(n_out));
    for (std::size_t a = 0; a < n_out; ++a)
      if (static_cast<std::size_t>(doc.elements[x][a].rows()) != dim)
        fail(xw + "/" + std::to_string(a), "matrix dimension differs from dim = " + std::to_string(dim));
  }
  if (j.contains("carrier")) {
    if (doc.kind != AssemblageDocument::Kind::Measurement) fail("/carrier", "only measurement documents have a carrier");
    doc.carrier = parse_matrix(j.at("carrier"), "/carrier");
    if (static_cast<std::size_t>(doc.carrier->rows()) != dim) fail("/carrier", "dimension differs from dim");
  }
  return doc;
}

std::string emit(const AssemblageDocument& doc) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = to_string(doc.kind);
  j["dim"] = doc.elements.front().front().rows();
  j["n_inputs"] = doc.elements.size();
  j["n_outputs"] = doc.elements.front().size();
  j["elements"] = elements_json(doc.elements);
  if (doc.carrier) j["carrier"] = matrix_json(*doc.carrier);
  return j.dump(1) + "\n";
}

NoiseModel parse_noise_model(const std::string& text) {
  const Json j = parse_json(text);
  reject_unknown(j, {"schema_version", "constraints", "fixed_noise"}, "");
  check_version(j);
  if (j.contains("fixed_noise") == j.contains("constraints"))
    fail("", "expected exactly one of 'constraints' or 'fixed_noise'");
  if (j.contains("fixed_noise")) return NoiseModel::fixed(parse_elements(j.at("fixed_noise"), "/fixed_noise"));
  const Json& list = j.at("constraints");
  if (!list.is_array()) fail("/constraints", "expected an array");
  std::vector<NoiseConstraint> constraints;
  for (std::size_t c = 0; c < list.size(); ++c) {
    const std::string cw = "/constraints/" + std::to_string(c);
    reject_unknown(list[c], {"coefficients", "relation", "rhs"}, cw);
    NoiseConstraint nc;
    nc.coefficients = parse_elements(require(list[c], "coefficients", cw), cw + "/coefficients");
    const Json& rel = require(list[c], "relation", cw);
    if (rel == "eq")
      nc.relation = NoiseConstraint::Relation::Equal;
    else if (rel == "le")
      nc.relation = NoiseConstraint::Relation::LessEqual;
    else if (rel == "ge")
      nc.relation = NoiseConstraint::Relation::GreaterEqual;
    else
      fail(cw + "/relation", "expected \"eq\", \"le\" or \"ge\"");
    nc.rhs = parse_number(require(list[c], "rhs", cw), cw + "/rhs");
    constraints.push_back(std::move(nc));
  }
  return NoiseModel::custom(std::move(constraints));
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest(const std::vector<std::string>& inputs) {
  std::uint64_t h = fnv1a("");
  for (const std::string& s : inputs) {
    h = fnv1a(std::to_string(s.size()) + ":", h);
    h = fnv1a(s, h);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Json certificate_summary(const sdp::Solution& s) {
  Json j;
  j["status"] = sdp::to_string(s.status);
  j["iterations"] = s.iterations;
  j["primal_objective"] = s.primal_objective;
  j["dual_objective"] = s.dual_objective;
  j["gap"] = s.gap;
  j["primal_residual"] = s.primal_residual;
  j["dual_residual"] = s.dual_residual;
  j["min_block_eigenvalue"] = s.min_block_eigenvalue;
  return j;
}

Json ReportDocument::to_json() const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["inputs_digest"] = inputs_digest;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["results"] = results;
  j["tolerances"] = tolerances;
  j["certificates"] = certificates;
  return j;
}

std::string ReportDocument::emit() const { return to_json().dump(1) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DocumentError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DocumentError("write to '" + path + "' failed");
}

}  // namespace distil::io
