#pragma once

// JSON documents for assemblages, noise models and command reports. Complex
// numbers are [re, im] pairs; matrices are row-major arrays of rows.

#include "distil/assemblage.hpp"
#include "distil/robustness.hpp"
#include "distil/sdp.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace distil::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

struct AssemblageDocument {
  enum class Kind { State, Measurement };
  Kind kind = Kind::State;
  Elements elements;
  /// Measurement documents only; absent means the identity.
  std::optional<Matrix> carrier;

  static AssemblageDocument from(const StateAssemblage& sigma);
  static AssemblageDocument from(const MeasurementAssemblage& e);

  /// Throw ValidationFailure (with element indices) unless the document holds
  /// a valid assemblage of the requested kind.
  StateAssemblage state() const;
  MeasurementAssemblage measurement() const;
};

std::string to_string(AssemblageDocument::Kind kind);

/// Throws DocumentError with a line/column (syntax) or JSON-pointer (content)
/// position. Unknown fields are rejected.
AssemblageDocument parse_assemblage(const std::string& text);
std::string emit(const AssemblageDocument& doc);

/// {"schema_version", "constraints": [{"coefficients": [x][a] matrices,
/// "relation": "eq" | "le" | "ge", "rhs": number}]} or
/// {"schema_version", "fixed_noise": [x][a] matrices}.
NoiseModel parse_noise_model(const std::string& text);

Json matrix_json(const Matrix& m);
Json elements_json(const Elements& elements);
Matrix parse_matrix(const Json& j, const std::string& where);
Elements parse_elements(const Json& j, const std::string& where);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
/// Digest of several inputs, each length-prefixed, as 16 hex digits.
std::string digest(const std::vector<std::string>& inputs);

Json certificate_summary(const sdp::Solution& solution);

struct ReportDocument {
  std::string command;
  std::string inputs_digest;
  std::optional<std::uint64_t> seed;
  Json results = Json::object();
  Json tolerances = Json::object();
  Json certificates = Json::array();

  Json to_json() const;
  std::string emit() const;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace distil::io
