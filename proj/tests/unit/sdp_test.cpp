#include "distil/errors.hpp"
#include "distil/maxrelent.hpp"
#include "distil/random.hpp"
#include "distil/sdp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace distil;
using namespace distil::sdp;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, Complex(v, 0.0)); }

// minimize lambda s.t. lambda * rho - eta = S >= 0.
Problem dmax_problem(const Matrix& eta, const Matrix& rho) {
  Problem p;
  const std::size_t lam = p.add_block("lambda", 1);
  const std::size_t slack = p.add_block("slack", rho.rows());
  p.add_objective(lam, scalar(1.0));
  p.add_hermitian_equality(
      {MapTerm{lam, [rho](const Matrix& c) { return scalar((rho * c).trace().real()); }}, scaled(slack, -1.0)},
      eta);
  return p;
}

}  // namespace

TEST(Sdp, ScalarMinimumIsOne) {
  Problem p;
  const std::size_t x = p.add_block("x", 1);
  p.add_objective(x, scalar(1.0));
  p.add_equality({{Term{x, scalar(1.0)}}, 1.0});
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  // Default gap_tol is relative: |p - d| <= 1e-7 (1 + |p| + |d|).
  EXPECT_NEAR(s.primal_objective, 1.0, 3e-7);
  EXPECT_NEAR(s.dual_objective, 1.0, 3e-7);
  EXPECT_NEAR(s.primal_blocks[0](0, 0).real(), 1.0, 1e-8);
}

TEST(Sdp, NegativeDiagonalIsInfeasibleWithRay) {
  Problem p;
  const std::size_t x = p.add_block("x", 2);
  p.add_equality({{Term{x, Matrix::Identity(2, 2)}}, 1.0});
  Matrix e00 = Matrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  p.add_equality({{Term{x, e00}}, -1.0});
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Infeasible);
  EXPECT_GT(s.ray_objective, 0.0);
  EXPECT_LE(s.ray_cone_violation, 1e-8);
  EXPECT_NEAR(farkas_cone_violation(p, s.farkas_ray), s.ray_cone_violation, 1e-12);
}

TEST(Sdp, InconsistentDuplicateRowsAreInfeasible) {
  Problem p;
  const std::size_t x = p.add_block("x", 1);
  p.add_equality({{Term{x, scalar(1.0)}}, 1.0});
  p.add_equality({{Term{x, scalar(2.0)}}, 3.0});
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Infeasible);
  EXPECT_NEAR(s.ray_objective, 1.0, 1e-12);
  EXPECT_LE(s.ray_cone_violation, 1e-10);
}

TEST(Sdp, ConsistentDuplicateRowsAreDropped) {
  Problem p;
  const std::size_t x = p.add_block("x", 2);
  p.add_objective(x, Matrix::Identity(2, 2));
  Matrix e00 = Matrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  p.add_equality({{Term{x, e00}}, 0.5});
  p.add_equality({{Term{x, 2.0 * e00}}, 1.0});
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.primal_objective, 0.5, 1e-7);
}

TEST(Sdp, ComplexObjectiveGivesMinimalEigenvalue) {
  Matrix y(2, 2);
  y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  Problem p;
  const std::size_t x = p.add_block("rho", 2);
  p.add_objective(x, y);
  p.add_equality({{Term{x, Matrix::Identity(2, 2)}}, 1.0});
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.primal_objective, -1.0, 1e-7);
  // Optimal density is the -1 eigenprojector of the Pauli Y matrix.
  Vector minus(2);
  minus << 1.0, Complex(0.0, -1.0);
  minus /= std::sqrt(2.0);
  EXPECT_LT((s.primal_blocks[0] - projector(minus)).norm(), 1e-4);
}

TEST(Sdp, FreeBlockReachesLowerBound) {
  // minimize x with x - s = -3, s >= 0.
  Problem p;
  const std::size_t x = p.add_block("x", 1, false);
  const std::size_t s = p.add_block("s", 1);
  p.add_objective(x, scalar(1.0));
  p.add_equality({{Term{x, scalar(1.0)}, Term{s, scalar(-1.0)}}, -3.0});
  const Solution sol = solve(p);
  ASSERT_EQ(sol.status, Status::Optimal);
  EXPECT_NEAR(sol.primal_objective, -3.0, 1e-6);
  EXPECT_NEAR(sol.primal_blocks[x](0, 0).real(), -3.0, 1e-6);
}

TEST(Sdp, UnboundedBelow) {
  Problem p;
  const std::size_t x = p.add_block("x", 2);
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = -1.0;
  p.add_objective(x, c);
  Matrix e11 = Matrix::Zero(2, 2);
  e11(1, 1) = 1.0;
  p.add_equality({{Term{x, e11}}, 1.0});
  const Solution s = solve(p);
  EXPECT_EQ(s.status, Status::Unbounded);
}

TEST(Sdp, ObjectiveOffsetIsAdded) {
  Problem p;
  const std::size_t x = p.add_block("x", 1);
  p.add_objective(x, scalar(2.0));
  p.set_objective_offset(-1.0);
  p.add_equality({{Term{x, scalar(1.0)}}, 1.0});
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  // Default gap_tol is relative: |p - d| <= 1e-7 (1 + |p| + |d|).
  EXPECT_NEAR(s.primal_objective, 1.0, 3e-7);
  EXPECT_NEAR(s.dual_objective, 1.0, 3e-7);
}

TEST(Sdp, MaxRelativeEntropyAgainstSpectralOracle) {
  for (int trial = 0; trial < 50; ++trial) {
    auto rng = random::derive(11, static_cast<std::uint64_t>(trial));
    const Matrix eta = random::random_density(rng, 2);
    const Matrix rho = random::random_density(rng, 2);
    const Solution s = solve(dmax_problem(eta, rho));
    ASSERT_EQ(s.status, Status::Optimal) << "trial " << trial;
    const double oracle = dmax(eta, rho);
    EXPECT_NEAR(std::log2(s.primal_objective), oracle, 1e-6) << "trial " << trial;
  }
}

TEST(Sdp, WeakDualityAndCertificateReplay) {
  for (int trial = 0; trial < 20; ++trial) {
    auto rng = random::derive(12, static_cast<std::uint64_t>(trial));
    const Matrix eta = random::random_density(rng, 3);
    const Matrix rho = random::random_density(rng, 3);
    const Problem p = dmax_problem(eta, rho);
    const Solution s = solve(p);
    ASSERT_EQ(s.status, Status::Optimal);
    EXPECT_LE(s.dual_objective, s.primal_objective + 1e-9);
    EXPECT_NEAR(primal_residual(p, s.primal_blocks), s.primal_residual, 1e-10);
    EXPECT_NEAR(objective_value(p, s.primal_blocks), s.primal_objective, 1e-10);
    EXPECT_LE(s.gap, 1e-7);
    EXPECT_LE(s.primal_residual, 1e-8);
    EXPECT_GE(s.min_block_eigenvalue, -1e-8);
  }
}

TEST(Sdp, HermitianMultiplierRecombinesBasis) {
  const auto basis = hermitian_entry_basis(3);
  ASSERT_EQ(basis.size(), 9u);
  auto rng = random::derive(13, 0);
  const Matrix h = random::random_hermitian(rng, 3);
  // Coordinates of h against the basis are tr(C_k h); the multiplier rebuilds
  // sum_k y_k C_k, which must be consistent with those inner products.
  Eigen::VectorXd y(9);
  for (int k = 0; k < 9; ++k) y(k) = (basis[k] * h).trace().real();
  const Matrix rebuilt = hermitian_multiplier(y, 0, 3);
  for (int k = 0; k < 9; ++k) EXPECT_NEAR((basis[k] * rebuilt).trace().real(), (basis[k] * basis[k]).trace().real() * y(k), 1e-12);
}

TEST(Sdp, RejectsIllFormedProblems) {
  Problem p;
  const std::size_t x = p.add_block("x", 2);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(p.add_objective(x, Matrix::Zero(3, 3)), IllFormedProblem);
  p.add_equality({{Term{x, bad}}, 0.0});
  EXPECT_THROW(solve(p), IllFormedProblem);
  Problem q;
  q.add_block("y", 1);
  q.add_equality({{Term{5, scalar(1.0)}}, 0.0});
  EXPECT_THROW(solve(q), IllFormedProblem);
  EXPECT_THROW(q.add_block("z", 0), IllFormedProblem);
}

TEST(Sdp, DeterministicOnRepeat) {
  auto rng = random::derive(14, 0);
  const Problem p = dmax_problem(random::random_density(rng, 3), random::random_density(rng, 3));
  const Solution a = solve(p);
  const Solution b = solve(p);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Sdp, SparseDumpHasSdpaHeader) {
  Problem p;
  const std::size_t x = p.add_block("x", 1);
  p.add_objective(x, scalar(1.0));
  p.add_equality({{Term{x, scalar(1.0)}}, 1.0});
  std::ostringstream os;
  write_sdpa_sparse(p, os);
  const std::string text = os.str();
  EXPECT_NE(text.find("\n1\n1\n2\n1\n"), std::string::npos) << text;
  EXPECT_NE(text.find("0 1 1 1 -0.5\n"), std::string::npos) << text;
  EXPECT_NE(text.find("1 1 1 1 0.5\n"), std::string::npos) << text;
}
