#include "distil/errors.hpp"
#include "distil/free_ops.hpp"
#include "distil/instances.hpp"
#include "distil/random.hpp"
#include "distil/robustness.hpp"

#include <gtest/gtest.h>

using namespace distil;

TEST(IncompatibilityFreeOp, IdentityLeavesMeasurements) {
  auto rng = random::derive(41, 0);
  const auto e = random::random_povms(rng, 3, 2, 3);
  const auto out = apply_incompatibility_free_op(e, identity_free_op(2, 3));
  EXPECT_LT(max_entry_difference(out.elements(), e.elements()), 1e-15);
  EXPECT_LT(max_abs(out.carrier() - e.carrier()), 1e-15);
}

TEST(IncompatibilityFreeOp, FullCoarseGrainingIsTrivial) {
  FreeOpSpec op = identity_free_op(2, 2);
  for (auto& per_x : op.relabel[0])
    for (auto& per_a : per_x)
      for (auto& p : per_a) p = {1.0, 0.0};
  const auto out = apply_incompatibility_free_op(instances::pauli_measurements(), op);
  EXPECT_LT(max_abs(out(0, 0) - identity(2)), 1e-15);
  EXPECT_LT(max_abs(out(1, 1)), 1e-15);
  EXPECT_TRUE(jm_membership(out).member);
  EXPECT_LT(incompatibility_robustness(out).value, 1e-7);
}

TEST(IncompatibilityFreeOp, OutputIsValidAndShaped) {
  auto rng = random::derive(42, 0);
  const auto e = random::random_povms(rng, 2, 2, 2);
  RandomFreeOpShape shape;
  shape.n_new_inputs = 3;
  shape.n_new_outputs = 4;
  shape.n_branches = 3;
  const auto out = apply_incompatibility_free_op(e, random_free_op(rng, shape));
  EXPECT_EQ(out.n_inputs(), 3u);
  EXPECT_EQ(out.n_outputs(), 4u);
  EXPECT_TRUE(validate_measurement_assemblage(out).empty()) << describe(validate_measurement_assemblage(out));
}

TEST(IncompatibilityFreeOp, MalformedDistributions) {
  const auto e = instances::pauli_measurements();
  FreeOpSpec op = identity_free_op(2, 2);
  op.omega = {0.5};
  EXPECT_THROW(apply_incompatibility_free_op(e, op), MalformedDistribution);
  op = identity_free_op(2, 2);
  op.input_choice[0][1] = {1.5, -0.5};
  EXPECT_THROW(apply_incompatibility_free_op(e, op), MalformedDistribution);
  op = identity_free_op(2, 2);
  op.relabel[0][0][1][0] = {1.0};
  EXPECT_THROW(apply_incompatibility_free_op(e, op), MalformedDistribution);
  op = identity_free_op(3, 2);
  EXPECT_THROW(apply_incompatibility_free_op(e, op), MalformedDistribution);
  // Within tolerance is accepted.
  op = identity_free_op(2, 2);
  op.omega = {1.0 + 5e-11};
  EXPECT_NO_THROW(apply_incompatibility_free_op(e, op));
}

TEST(IncompatibilityFreeOp, RobustnessDoesNotIncrease) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    auto rng = random::derive(43, i);
    const auto e = i == 0 ? instances::pauli_measurements() : random::random_projective_measurements(rng, 2, 2, 2);
    const auto out = apply_incompatibility_free_op(e, random_free_op(rng, RandomFreeOpShape{}));
    EXPECT_LE(incompatibility_robustness(out).value, incompatibility_robustness(e).value + 1e-6) << "instance " << i;
  }
}

TEST(IncompatibilityFreeOp, InducedSteeringBoundDoesNotIncrease) {
  auto rng = random::derive(44, 0);
  const auto e = instances::pauli_measurements();
  const auto out = apply_incompatibility_free_op(e, random_free_op(rng, RandomFreeOpShape{}));
  InducedIncompatibilityConfig config;
  config.n_restarts = 3;
  const double before = steering_induced_incompatibility(e, SteeringMeasure::SR, config).lower_bound;
  const double after = steering_induced_incompatibility(out, SteeringMeasure::SR, config).lower_bound;
  EXPECT_LE(after, before + 1e-6);
}

TEST(SteeringFreeOp, IdentityLeavesAssemblage) {
  auto rng = random::derive(45, 0);
  const auto sigma = random::random_state_assemblage(rng, 3, 2, 2);
  const auto out = apply_steering_free_op(sigma, identity_free_op(2, 2, 3));
  EXPECT_LT(max_entry_difference(out.elements(), sigma.elements()), 1e-15);
}

TEST(SteeringFreeOp, ScaledIdentityBranchesMatchMeasurementMap) {
  auto rng = random::derive(46, 0);
  const auto e = random::random_povms(rng, 2, 2, 2);
  FreeOpSpec op = random_free_op(rng, RandomFreeOpShape{});
  // Relabelling that ignores the original input, as in the measurement map.
  for (auto& per_w : op.relabel)
    for (auto& per_xp : per_w)
      for (std::size_t x = 1; x < per_xp.size(); ++x) per_xp[x] = per_xp[0];
  op.instrument.clear();
  for (double p : op.omega) op.instrument.push_back({std::sqrt(p) * identity(2)});
  const StateAssemblage sigma(scale_elements(e.elements(), 0.5));
  const auto via_states = apply_steering_free_op(sigma, op);
  const auto via_measurements = apply_incompatibility_free_op(e, op);
  EXPECT_LT(max_entry_difference(via_states.elements(), scale_elements(via_measurements.elements(), 0.5)), 1e-14);
}

TEST(SteeringFreeOp, MalformedInstrument) {
  const auto sigma = instances::pauli_state_assemblage();
  FreeOpSpec op = identity_free_op(2, 2, 2);
  op.instrument[0][0] *= 0.9;
  EXPECT_THROW(apply_steering_free_op(sigma, op), MalformedInstrument);
  op = identity_free_op(2, 2, 3);
  EXPECT_THROW(apply_steering_free_op(sigma, op), MalformedInstrument);
  op = identity_free_op(2, 2);
  EXPECT_THROW(apply_steering_free_op(sigma, op), MalformedInstrument);
}

TEST(SteeringFreeOp, OutputNoSignallingAndRobustnessDoesNotIncrease) {
  for (std::uint64_t i = 0; i < 4; ++i) {
    auto rng = random::derive(47, i);
    const auto sigma = random::random_steerable_assemblage(rng, 2, 2, 2);
    RandomFreeOpShape shape;
    shape.dim = 2;
    shape.dim_out = i % 2 == 0 ? 2 : 3;
    shape.kraus_per_branch = 2;
    const auto out = apply_steering_free_op(sigma, random_free_op(rng, shape));
    EXPECT_TRUE(validate_state_assemblage(out).empty()) << describe(validate_state_assemblage(out));
    EXPECT_LE(steering_robustness(out).value, steering_robustness(sigma).value + 1e-6) << "instance " << i;
  }
}

TEST(RandomFreeOp, DeterministicPerSeed) {
  auto r1 = random::derive(48, 0);
  auto r2 = random::derive(48, 0);
  RandomFreeOpShape shape;
  shape.dim = 2;
  const FreeOpSpec a = random_free_op(r1, shape);
  const FreeOpSpec b = random_free_op(r2, shape);
  EXPECT_EQ(a.omega, b.omega);
  EXPECT_EQ(a.relabel, b.relabel);
  EXPECT_LT(max_abs(a.instrument[1][0] - b.instrument[1][0]), 0.0 + 1e-300);
}
