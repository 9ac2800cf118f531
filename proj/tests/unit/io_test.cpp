#include "distil/errors.hpp"
#include "distil/instances.hpp"
#include "distil/io.hpp"
#include "distil/random.hpp"

#include <gtest/gtest.h>

using namespace distil;

namespace {

std::string pauli_text() { return io::emit(io::AssemblageDocument::from(instances::pauli_state_assemblage())); }

void expect_document_error(const std::string& text, const std::string& fragment) {
  try {
    io::parse_assemblage(text);
    FAIL() << "parsed: " << text;
  } catch (const DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(AssemblageDocument, RoundTripIsBitExact) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    auto rng = random::derive(61, i);
    const auto sigma = random::random_state_assemblage(rng, 3, 2, 3);
    const std::string text = io::emit(io::AssemblageDocument::from(sigma));
    const io::AssemblageDocument back = io::parse_assemblage(text);
    EXPECT_EQ(max_entry_difference(back.elements, sigma.elements()), 0.0);
    EXPECT_EQ(io::emit(back), text);

    const auto e = random::random_povms(rng, 2, 3, 2);
    const io::AssemblageDocument md = io::parse_assemblage(io::emit(io::AssemblageDocument::from(e)));
    EXPECT_EQ(md.kind, io::AssemblageDocument::Kind::Measurement);
    EXPECT_EQ(max_entry_difference(md.measurement().elements(), e.elements()), 0.0);
  }
}

TEST(AssemblageDocument, CarrierIsKept) {
  const auto seo = compute_seo(instances::qubit_qutrit_assemblage(1.0));
  const auto doc = io::parse_assemblage(io::emit(io::AssemblageDocument::from(seo)));
  ASSERT_TRUE(doc.carrier.has_value());
  EXPECT_EQ(max_abs(*doc.carrier - seo.carrier()), 0.0);
  EXPECT_EQ(doc.measurement().carrier_rank(), 2);
}

TEST(AssemblageDocument, PositionedErrors) {
  const std::string good = pauli_text();
  expect_document_error("{\"schema_version\": ", "syntax error at byte");
  expect_document_error(replace(good, "\"kind\"", "\"colour\": 1, \"kind\""), "/colour: unknown field");
  expect_document_error(replace(good, "\"1.0\"", "\"2.0\""), "/schema_version");
  expect_document_error(replace(good, "\"n_outputs\": 2", "\"n_outputs\": 3"), "/elements/0");
  expect_document_error(replace(good, "\"dim\": 2", "\"dim\": 0"), "/dim");
  expect_document_error(replace(good, "\"state\"", "\"channel\""), "/kind");
  // First entry of element [0][0] becomes a string.
  expect_document_error(replace(good, "0.5,", "\"x\","), "/elements/0/0/0/0/0");
}

TEST(AssemblageDocument, ValidationReportsIndices) {
  Elements el = instances::pauli_state_assemblage().elements();
  el[1][0](0, 0) = -0.2;
  el[1][1](0, 0) = 0.7;
  const auto doc = io::parse_assemblage(io::emit(io::AssemblageDocument{io::AssemblageDocument::Kind::State, el, {}}));
  try {
    doc.state();
    FAIL();
  } catch (const ValidationFailure& e) {
    EXPECT_NE(std::string(e.what()).find("[1][0]"), std::string::npos) << e.what();
  }
  EXPECT_THROW(doc.measurement(), ValidationFailure);
}

TEST(NoiseModelDocument, ParsesConstraintsAndFixedNoise) {
  const std::string text = R"({"schema_version": "1.0", "constraints": [
    {"coefficients": [[[[[1,0],[0,0]],[[0,0],[1,0]]], [[[0,0],[0,0]],[[0,0],[0,0]]]],
                      [[[[0,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[0,0]]]]],
     "relation": "ge", "rhs": 0.9}]})";
  const NoiseModel m = io::parse_noise_model(text);
  EXPECT_EQ(m.kind, NoiseModel::Kind::Custom);
  ASSERT_EQ(m.constraints.size(), 1u);
  EXPECT_EQ(m.constraints[0].relation, NoiseConstraint::Relation::GreaterEqual);
  EXPECT_EQ(m.constraints[0].rhs, 0.9);

  io::Json fixed;
  fixed["schema_version"] = "1.0";
  fixed["fixed_noise"] = io::elements_json(instances::pauli_state_assemblage().elements());
  EXPECT_EQ(io::parse_noise_model(fixed.dump()).constraints.size(), 16u);

  EXPECT_THROW(io::parse_noise_model(R"({"schema_version": "1.0", "constraints": [{"relation": "eq"}]})"),
               DocumentError);
  EXPECT_THROW(io::parse_noise_model(R"({"schema_version": "1.0"})"), DocumentError);
}

TEST(Digest, Fnv1aReferenceValues) {
  // Published FNV-1a 64 test vectors.
  EXPECT_EQ(io::fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(io::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(io::fnv1a("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(io::digest({"ab", "c"}).size(), 16u);
  EXPECT_NE(io::digest({"ab", "c"}), io::digest({"a", "bc"}));
}

TEST(ReportDocument, SelfDescribing) {
  io::ReportDocument r;
  r.command = "robustness";
  r.inputs_digest = io::digest({"x"});
  r.seed = 7;
  r.results["value"] = 0.25;
  r.tolerances["gap"] = 1e-9;
  const io::Json j = io::Json::parse(r.emit());
  EXPECT_EQ(j["command"], "robustness");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["results"]["value"], 0.25);
  EXPECT_TRUE(j.contains("certificates"));
}
