#include "distil/errors.hpp"
#include "distil/filters.hpp"
#include "distil/instances.hpp"
#include "distil/ordering.hpp"
#include "distil/random.hpp"

#include <gtest/gtest.h>

using namespace distil;

namespace {

Matrix cyclic_shift3() {
  Matrix p = Matrix::Zero(3, 3);
  p(2, 0) = p(0, 1) = p(1, 2) = 1.0;  // |0> -> |2>, |1> -> |0>, |2> -> |1>
  return p;
}

}  // namespace

TEST(VerifyOrderWitness, SelfWithIdentity) {
  auto rng = random::derive(50, 0);
  const StateAssemblage s = random::random_state_assemblage(rng, 3, 2, 2);
  const WitnessCheck c = verify_order_witness(s, s, identity(3));
  EXPECT_TRUE(c.accepted()) << c.reason;
  EXPECT_LT(c.witness.residual, 1e-12);
  EXPECT_NEAR(c.witness.lambda_opt, 1.0, 1e-9);
}

TEST(VerifyOrderWitness, QubitQutritExample) {
  for (double v : {0.1, 0.5, 1.0}) {
    const WitnessCheck c =
        verify_order_witness(instances::qubit_qutrit_assemblage(v), instances::embedded_pauli_assemblage(), identity(3));
    EXPECT_TRUE(c.accepted()) << c.reason;
    EXPECT_NEAR(c.witness.lambda_opt, 1.0 / v, 1e-9);
  }
}

TEST(VerifyOrderWitness, RotatedSupportIsRejected) {
  const StateAssemblage s = instances::embedded_pauli_assemblage();
  const WitnessCheck c = verify_order_witness(s, s, cyclic_shift3());
  EXPECT_EQ(c.outcome, WitnessCheck::Outcome::SupportFailure);
}

TEST(VerifyOrderWitness, NonUnitaryAndShapeErrors) {
  const StateAssemblage s = instances::embedded_pauli_assemblage();
  EXPECT_EQ(verify_order_witness(s, s, 0.5 * identity(3)).outcome, WitnessCheck::Outcome::NotUnitary);
  EXPECT_THROW(verify_order_witness(s, s, identity(2)), DimensionMismatch);
  EXPECT_THROW(verify_order_witness(s, instances::pauli_state_assemblage(), identity(3)), DimensionMismatch);
}

TEST(SearchOrderWitness, RankRefutation) {
  const OrderVerdict v =
      search_order_witness(instances::embedded_pauli_assemblage(), instances::qubit_qutrit_assemblage(0.5));
  EXPECT_EQ(v.status, OrderVerdict::Status::RefutedByRank);
  EXPECT_EQ(v.rank_sigma, 2);
  EXPECT_EQ(v.rank_tau, 3);
}

TEST(SearchOrderWitness, SelfHoldsNearIdentity) {
  auto rng = random::derive(51, 0);
  const StateAssemblage s = random::random_state_assemblage(rng, 3, 2, 2);
  const OrderVerdict v = search_order_witness(s, s, OrderConfig{3, 200, 7, 1e-7});
  ASSERT_EQ(v.status, OrderVerdict::Status::Holds);
  EXPECT_LT(v.witness->residual, 1e-9);
  // Restart 0 starts at the identity, which is already optimal.
  EXPECT_LT((v.witness->u - identity(3)).norm(), 1e-8);
  EXPECT_NEAR(v.best->lambda_opt, 1.0, 1e-8);
}

TEST(SearchOrderWitness, QubitQutritExampleHolds) {
  const OrderVerdict v = search_order_witness(instances::qubit_qutrit_assemblage(0.4),
                                              instances::embedded_pauli_assemblage(), OrderConfig{5, 300, 1, 1e-7});
  ASSERT_EQ(v.status, OrderVerdict::Status::Holds);
  EXPECT_NEAR(1.0 / v.best->lambda_opt, 0.4, 1e-7);
}

TEST(SearchOrderWitness, FilteredAssemblagesRoundTrip) {
  int holds = 0;
  for (int t = 0; t < 12; ++t) {
    auto rng = random::derive(52, static_cast<std::uint64_t>(t));
    const Eigen::Index d = 2 + t % 2;
    const StateAssemblage s = random::random_state_assemblage(rng, d, 2, 2);
    const FilterOutcome f = apply_filter(s, random::random_contraction(rng, d));
    const OrderVerdict v = search_order_witness(s, f.output, OrderConfig{20, 500, 100 + static_cast<std::uint64_t>(t), 1e-7});
    ASSERT_NE(v.status, OrderVerdict::Status::RefutedByRank);
    if (v.status != OrderVerdict::Status::Holds) continue;
    ++holds;
    const FilterKraus l = synthesize_filter(s, f.output, v.best->u);
    const FilterOutcome replay = apply_filter(s, l);
    EXPECT_LE(max_entry_difference(replay.output.elements(), f.output.elements()), 1e-6);
    EXPECT_GE(replay.p_succ, f.p_succ - 1e-7);
  }
  EXPECT_GE(holds, 11);
}

TEST(SearchOrderWitness, DeterministicForFixedSeed) {
  auto rng = random::derive(53, 0);
  const StateAssemblage s = random::random_state_assemblage(rng, 2, 2, 2);
  const StateAssemblage t = apply_filter(s, random::random_contraction(rng, 2)).output;
  const OrderConfig cfg{4, 200, 9, 1e-7};
  const OrderVerdict a = search_order_witness(s, t, cfg);
  const OrderVerdict b = search_order_witness(s, t, cfg);
  ASSERT_EQ(a.status, b.status);
  EXPECT_EQ(a.best_residual, b.best_residual);
  if (a.witness) EXPECT_EQ((a.witness->u - b.witness->u).norm(), 0.0);
}

TEST(SearchOrderWitness, RankNoGoOnConstructedPairs) {
  for (int t = 0; t < 20; ++t) {
    auto rng = random::derive(54, static_cast<std::uint64_t>(t));
    const MeasurementAssemblage e = random::random_povms(rng, 3, 2, 2);
    const StateAssemblage low = assemblage_from_seo(e, embed(random::random_density(rng, 2), 3), identity(3));
    const StateAssemblage high = assemblage_from_seo(e, random::random_density(rng, 3), identity(3));
    const OrderVerdict v = search_order_witness(low, high, OrderConfig{2, 50, 0, 1e-7});
    EXPECT_EQ(v.status, OrderVerdict::Status::RefutedByRank);
  }
}

TEST(SearchOrderWitness, TransitivityOfComposedWitness) {
  for (int t = 0; t < 5; ++t) {
    auto rng = random::derive(55, static_cast<std::uint64_t>(t));
    const StateAssemblage s = random::random_state_assemblage(rng, 2, 2, 2);
    const StateAssemblage mid = apply_filter(s, random::random_invertible_contraction(rng, 2)).output;
    const StateAssemblage end = apply_filter(mid, random::random_invertible_contraction(rng, 2)).output;
    const OrderConfig cfg{20, 500, 3, 1e-7};
    const OrderVerdict v1 = search_order_witness(s, mid, cfg);
    const OrderVerdict v2 = search_order_witness(mid, end, cfg);
    ASSERT_EQ(v1.status, OrderVerdict::Status::Holds);
    ASSERT_EQ(v2.status, OrderVerdict::Status::Holds);
    const WitnessCheck composed = verify_order_witness(s, end, v2.witness->u * v1.witness->u, 1e-6);
    EXPECT_TRUE(composed.accepted()) << composed.reason;
  }
}

TEST(SeoEquivalent, Examples) {
  auto rng = random::derive(56, 0);
  const StateAssemblage s = random::random_state_assemblage(rng, 2, 2, 2);
  const OrderConfig cfg{5, 300, 0, 1e-7};
  EXPECT_EQ(seo_equivalent(s, s, cfg).status, Equivalence::Status::Equivalent);

  const Equivalence paper =
      seo_equivalent(instances::qubit_qutrit_assemblage(0.5), instances::embedded_pauli_assemblage(), cfg);
  EXPECT_EQ(paper.status, Equivalence::Status::NotEquivalent);
  EXPECT_EQ(paper.forward.status, OrderVerdict::Status::Holds);
  EXPECT_EQ(paper.backward.status, OrderVerdict::Status::RefutedByRank);

  const MeasurementAssemblage e = random::random_povms(rng, 3, 2, 2);
  const StateAssemblage a = assemblage_from_seo(e, random::random_density(rng, 3), identity(3));
  const StateAssemblage b = assemblage_from_seo(e, random::random_density(rng, 3), random::haar_unitary(rng, 3));
  const Equivalence rotated = seo_equivalent(a, b, OrderConfig{20, 500, 0, 1e-7});
  EXPECT_EQ(rotated.status, Equivalence::Status::Equivalent) << rotated.reason;
}
