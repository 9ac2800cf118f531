#pragma once

// Dense block semidefinite programs over complex Hermitian variables:
//
//   minimize    sum_b Re tr(C_b X_b) + offset
//   subject to  sum_b Re tr(A_ib X_b) = b_i      for every constraint i
//               X_b >= 0                          for every PSD block b
//
// Non-PSD ("free") blocks are allowed. The solver works on the real symmetric
// embedding of every block and runs a primal-dual interior-point method with
// Nesterov-Todd scaling and Mehrotra predictor-corrector steps.

#include "distil/linalg.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace distil::sdp {

struct BlockSpec {
  std::string name;
  Eigen::Index dim = 0;
  bool psd = true;
};

/// Contributes Re tr(coefficient * X_block) to a linear functional.
struct Term {
  std::size_t block;
  Matrix coefficient;
};

struct LinearConstraint {
  std::vector<Term> terms;
  double rhs = 0.0;
};

/// A linear map on one block, given through its adjoint (Hilbert-Schmidt).
struct MapTerm {
  std::size_t block;
  std::function<Matrix(const Matrix&)> adjoint;
};

/// The map X -> factor * X.
MapTerm scaled(std::size_t block, double factor);

class Problem {
 public:
  std::size_t add_block(std::string name, Eigen::Index dim, bool psd = true);
  void add_objective(std::size_t block, const Matrix& coefficient);
  void set_objective_offset(double offset) { offset_ = offset; }

  /// Returns the index of the new constraint.
  std::size_t add_equality(LinearConstraint constraint);

  /// Hermitian-valued equality sum_t Phi_t(X_{block_t}) = rhs, expanded into
  /// dim^2 real equalities over the Hermitian entry basis (diagonal entries,
  /// then real and imaginary parts of the strict upper triangle). Returns the
  /// index of the first generated constraint.
  std::size_t add_hermitian_equality(const std::vector<MapTerm>& terms, const Matrix& rhs);

  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  const std::vector<Matrix>& objective() const { return objective_; }
  double objective_offset() const { return offset_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  /// Throws IllFormedProblem on bad block indices, shape errors or
  /// non-Hermitian coefficients.
  void validate() const;

 private:
  std::vector<BlockSpec> blocks_;
  std::vector<Matrix> objective_;
  std::vector<LinearConstraint> constraints_;
  double offset_ = 0.0;
};

/// Hermitian basis used by add_hermitian_equality, in constraint order.
std::vector<Matrix> hermitian_entry_basis(Eigen::Index dim);

/// Recombines the dim^2 multipliers of a Hermitian equality starting at
/// `first` into the Hermitian dual operator sum_k y_k C_k.
Matrix hermitian_multiplier(const Eigen::VectorXd& y, std::size_t first, Eigen::Index dim);

struct Options {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iters = 100;
  /// Debug: when set, solve() first writes the SDPA dump of the problem here.
  std::string dump_path;
};

enum class Status { Optimal, Infeasible, Unbounded, MaxIterations };

std::string to_string(Status status);

struct Solution {
  Status status = Status::MaxIterations;
  std::vector<Matrix> primal_blocks;
  Eigen::VectorXd dual_multipliers;
  std::vector<Matrix> dual_slacks;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  /// |p - d| / (1 + |p| + |d|).
  double gap = 0.0;
  /// ||A(X) - b|| / (1 + ||b||), recomputable with primal_residual().
  double primal_residual = 0.0;
  /// ||C - A^T(y) - Z||_F / (1 + ||C||_F).
  double dual_residual = 0.0;
  double min_block_eigenvalue = 0.0;
  int iterations = 0;
  /// Infeasible: y with b^T y = 1 and -A^T(y) PSD up to ray_cone_violation.
  Eigen::VectorXd farkas_ray;
  double ray_objective = 0.0;
  double ray_cone_violation = 0.0;
};

Solution solve(const Problem& problem, const Options& options = {});

/// ||A(X) - b|| / (1 + ||b||) for the given blocks.
double primal_residual(const Problem& problem, const std::vector<Matrix>& blocks);
double objective_value(const Problem& problem, const std::vector<Matrix>& blocks);

/// Worst PSD violation of -A^T(y), i.e. how far y is from a Farkas ray.
double farkas_cone_violation(const Problem& problem, const Eigen::VectorXd& y);

/// Writes the real-embedded problem in SDPA sparse format (see docs/sdp_dump.md).
void write_sdpa_sparse(const Problem& problem, std::ostream& out);

}  // namespace distil::sdp
