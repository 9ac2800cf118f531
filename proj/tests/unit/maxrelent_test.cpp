#include "distil/errors.hpp"
#include "distil/maxrelent.hpp"
#include "distil/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace distil;

TEST(Dmax, SelfDivergenceIsZero) {
  for (int t = 0; t < 20; ++t) {
    auto rng = random::derive(30, static_cast<std::uint64_t>(t));
    const Matrix rho = random::random_density(rng, 2 + t % 3, 1 + t % 2);
    EXPECT_NEAR(dmax(rho, rho), 0.0, 1e-10);
    EXPECT_NEAR(lambda_opt(rho, rho), 1.0, 1e-10);
  }
}

TEST(Dmax, PureAgainstMaximallyMixedIsOneBit) {
  EXPECT_NEAR(dmax(projector(ket(2, 0)), identity(2) / 2.0), 1.0, 1e-12);
}

TEST(Dmax, DisjointSupportsAreInfinite) {
  EXPECT_EQ(dmax(projector(ket(2, 0)), projector(ket(2, 1))), kInfinity);
  EXPECT_EQ(lambda_opt(projector(ket(3, 2)), (identity(3) - projector(ket(3, 2))) / 2.0), kInfinity);
}

TEST(LambdaOpt, QubitQutritExample) {
  for (double v : {0.1, 0.5, 0.9, 1.0}) {
    Matrix target = Matrix::Zero(3, 3);
    target(0, 0) = target(1, 1) = 0.5;
    Matrix reference = Matrix::Zero(3, 3);
    reference(0, 0) = reference(1, 1) = v / 2;
    reference(2, 2) = 1 - v;
    EXPECT_NEAR(lambda_opt(target, reference), 1.0 / v, 1e-10) << v;
  }
}

TEST(LambdaOpt, IsTightOperatorBound) {
  for (int t = 0; t < 20; ++t) {
    auto rng = random::derive(31, static_cast<std::uint64_t>(t));
    const Matrix eta = random::random_density(rng, 3);
    const Matrix rho = random::random_density(rng, 3);
    const double lam = lambda_opt(eta, rho);
    EXPECT_GE(lam, 1.0 - 1e-9);
    EXPECT_GE(min_eigenvalue(lam * rho - eta), -1e-9 * lam);
    EXPECT_LE(min_eigenvalue((lam * (1 - 1e-6)) * rho - eta), 0.0);
    const double p = std::pow(2.0, -dmax(eta, rho));
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 1.0 + 1e-12);
  }
}

TEST(Dmax, MonotoneUnderMixingWithTarget) {
  for (int t = 0; t < 20; ++t) {
    auto rng = random::derive(32, static_cast<std::uint64_t>(t));
    const Matrix eta = random::random_density(rng, 3);
    const Matrix rho = random::random_density(rng, 3);
    const double base = dmax(eta, rho);
    for (double p : {0.0, 0.25, 0.5, 1.0}) EXPECT_LE(dmax(eta, (1 - p) * rho + p * eta), base + 1e-9);
  }
}

TEST(Dmax, InputValidation) {
  EXPECT_THROW(dmax(identity(2), identity(2) / 2.0), NonUnitTrace);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(dmax(neg, identity(2) / 2.0), NegativeOperator);
}
