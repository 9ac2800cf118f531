#include "distil/errors.hpp"
#include "distil/filters.hpp"
#include "distil/instances.hpp"
#include "distil/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace distil;

namespace {

Matrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

Matrix swap2() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  return s;
}

StateAssemblage trivial_assemblage(const Matrix& rho) {
  return StateAssemblage(Elements{{0.25 * rho, 0.75 * rho}, {0.5 * rho, 0.5 * rho}});
}

}  // namespace

TEST(ApplyFilter, IdentityLeavesAssemblage) {
  auto rng = random::derive(40, 0);
  const StateAssemblage s = random::random_state_assemblage(rng, 3, 2, 2);
  const FilterOutcome out = apply_filter(s, identity(3));
  EXPECT_NEAR(out.p_succ, 1.0, 1e-12);
  EXPECT_LT(max_entry_difference(out.output.elements(), s.elements()), 1e-14);
}

TEST(ApplyFilter, QubitQutritExampleIsExact) {
  const StateAssemblage target = instances::embedded_pauli_assemblage();
  for (double v : {0.1, 0.5, 1.0}) {
    const FilterOutcome out = apply_filter(instances::qubit_qutrit_assemblage(v), instances::qubit_block_filter());
    EXPECT_NEAR(out.p_succ, v, 1e-12);
    EXPECT_LE(max_entry_difference(out.output.elements(), target.elements()), 1e-12);
    EXPECT_TRUE(validate_state_assemblage(out.output).empty());
  }
}

TEST(ApplyFilter, VanishingSuccessProbability) {
  const StateAssemblage s(Elements{{projector(ket(2, 1))}});
  EXPECT_THROW(apply_filter(s, projector(ket(2, 0))), VanishingSuccessProbability);
}

TEST(ApplyFilter, ContractionViolation) {
  const StateAssemblage s = instances::pauli_state_assemblage();
  EXPECT_THROW(apply_filter(s, 1.01 * identity(2)), ContractionViolation);
  EXPECT_THROW(FilterKraus::from_operator(2.0 * identity(2)), ContractionViolation);
  EXPECT_THROW(apply_filter(s, identity(3)), DimensionMismatch);
}

TEST(ApplyFilter, PSuccMatchesTraceFormulaAndComposes) {
  for (int t = 0; t < 20; ++t) {
    auto rng = random::derive(41, static_cast<std::uint64_t>(t));
    const Eigen::Index d = 2 + t % 2;
    const StateAssemblage s = random::random_state_assemblage(rng, d, 2, 2);
    const Matrix k1 = random::random_contraction(rng, d);
    const Matrix k2 = random::random_contraction(rng, d);
    const FilterOutcome a = apply_filter(s, k1);
    EXPECT_NEAR(a.p_succ, real_trace(k1 * reduced_state(s) * k1.adjoint()), 1e-12);
    const FilterOutcome ab = apply_filter(a.output, k2);
    const FilterOutcome direct = apply_filter(s, Matrix(k2 * k1));
    EXPECT_LE(max_entry_difference(ab.output.elements(), direct.output.elements()), 1e-8);
    EXPECT_NEAR(a.p_succ * ab.p_succ, direct.p_succ, 1e-12);
  }
}

TEST(SynthesizeFilter, SelfGivesSupportProjector) {
  auto rng = random::derive(42, 0);
  const Matrix rho = random::random_density(rng, 3, 2);
  const StateAssemblage s = trivial_assemblage(rho);
  const FilterKraus l = synthesize_filter(s, s, identity(3));
  EXPECT_LT((l.k - support_projector(rho)).norm(), 1e-8);
  ASSERT_TRUE(l.lambda_opt.has_value());
  EXPECT_NEAR(*l.lambda_opt, 1.0, 1e-9);
  EXPECT_NEAR(apply_filter(s, l).p_succ, 1.0, 1e-9);
}

TEST(SynthesizeFilter, QubitQutritReproducesBlockFilter) {
  for (double v : {0.1, 0.5, 0.9, 1.0}) {
    const StateAssemblage s = instances::qubit_qutrit_assemblage(v);
    const StateAssemblage target = instances::embedded_pauli_assemblage();
    const FilterKraus l = synthesize_filter(s, target, identity(3));
    EXPECT_LT((l.k - instances::qubit_block_filter()).norm(), 1e-9) << v;
    EXPECT_NEAR(*l.lambda_opt, 1.0 / v, 1e-9);
    const FilterOutcome out = apply_filter(s, l);
    EXPECT_NEAR(out.p_succ, v, 1e-9);
    EXPECT_LE(max_entry_difference(out.output.elements(), target.elements()), 1e-9);
  }
}

TEST(SynthesizeFilter, RankIncreaseIsSupportViolation) {
  EXPECT_THROW(synthesize_filter(instances::embedded_pauli_assemblage(), instances::qubit_qutrit_assemblage(0.5),
                                 identity(3)),
               SupportViolation);
}

TEST(SynthesizeFilter, WrongUnitaryIsInvalidWitness) {
  auto rng = random::derive(43, 0);
  const StateAssemblage s = random::random_state_assemblage(rng, 2, 2, 2);
  const StateAssemblage t = apply_filter(s, random::random_invertible_contraction(rng, 2)).output;
  EXPECT_THROW(synthesize_filter(s, t, random::haar_unitary(rng, 2)), InvalidWitness);
}

TEST(MaxSuccessProbability, Examples) {
  const StateAssemblage s = instances::qubit_qutrit_assemblage(0.3);
  EXPECT_THROW(max_success_probability(s, s, {}), EmptyWitnessList);

  const SuccessBound self = max_success_probability(s, s, {identity(3)});
  EXPECT_NEAR(self.p_max, 1.0, 1e-9);
  EXPECT_EQ(self.best_index, 0u);

  const SuccessBound paper = max_success_probability(s, instances::embedded_pauli_assemblage(), {identity(3)});
  EXPECT_NEAR(paper.p_max, 0.3, 1e-9);
}

TEST(MaxSuccessProbability, LargerValueWinsAndTiesGoFirst) {
  // Trivial assemblages: every unitary is a witness, lambda depends on U.
  const StateAssemblage s = trivial_assemblage(diag({0.7, 0.3}));
  const SuccessBound b = max_success_probability(s, s, {swap2(), identity(2)});
  EXPECT_EQ(b.best_index, 1u);
  EXPECT_NEAR(b.p_max, 1.0, 1e-9);
  const SuccessBound swapped = max_success_probability(s, s, {swap2()});
  EXPECT_NEAR(swapped.p_max, 0.3 / 0.7, 1e-9);
  const SuccessBound tie = max_success_probability(s, s, {identity(2), identity(2)});
  EXPECT_EQ(tie.best_index, 0u);
}

TEST(SynthesizeFilter, SuccessProbabilityEqualsDmaxBound) {
  for (int t = 0; t < 20; ++t) {
    auto rng = random::derive(44, static_cast<std::uint64_t>(t));
    const Eigen::Index d = 2 + t % 2;
    const MeasurementAssemblage e = random::random_povms(rng, d, 2, 2);
    const Matrix rho_s = random::random_density(rng, d);
    const Matrix rho_t = random::random_density(rng, d);
    const Matrix u = random::haar_unitary(rng, d);
    const StateAssemblage s = assemblage_from_seo(e, rho_s, identity(d));
    const StateAssemblage tt = assemblage_from_seo(e, rho_t, u);
    const FilterKraus l = synthesize_filter(s, tt, u);
    const double expected = std::pow(2.0, -dmax(rho_t, hermitian_part(u * rho_s * u.adjoint())));
    const FilterOutcome out = apply_filter(s, l);
    EXPECT_NEAR(out.p_succ, expected, 1e-9);
    EXPECT_GE(l.contraction_slack, -1e-12);
    EXPECT_LE(max_entry_difference(out.output.elements(), tt.elements()), 1e-7);
  }
}
