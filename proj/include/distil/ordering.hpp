#pragma once

// SEO ordering sigma >_SEO tau: tau = sqrt(rho_tau) U B U^dagger sqrt(rho_tau)
// for some unitary U with supp(rho_tau) inside supp(U rho_sigma U^dagger),
// where B is the SEO of sigma.

#include "distil/assemblage.hpp"
#include "distil/maxrelent.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace distil {

struct OrderConfig {
  int n_restarts = 20;
  int max_iters = 500;
  std::uint64_t seed = 0;
  double tol_order = 1e-7;
};

struct OrderWitness {
  Matrix u;
  /// sum_{x,a} ||tau_{a|x} - sqrt(rho_tau) U B_{a|x} U^dagger sqrt(rho_tau)||_F.
  double residual = 0.0;
  /// 2^{D_max(rho_tau || U rho_sigma U^dagger)}.
  ExtendedReal lambda_opt = kInfinity;
};

struct WitnessCheck {
  enum class Outcome { Accepted, NotUnitary, SupportFailure, ResidualFailure };
  Outcome outcome = Outcome::ResidualFailure;
  OrderWitness witness;
  /// ||(I - P_{U rho_sigma U^dagger}) P_tau||_F.
  double support_excess = 0.0;
  /// max entry of B^tau - P_tau U B^sigma U^dagger P_tau.
  double seo_mismatch = 0.0;
  std::string reason;

  bool accepted() const { return outcome == Outcome::Accepted; }
};

/// Accepts iff the support inclusion holds (projector test, 1e-8), the
/// residual is at most tol_order, and the SEO of tau matches the compression
/// of U B U^dagger to supp(rho_tau). Throws DimensionMismatch.
WitnessCheck verify_order_witness(const StateAssemblage& sigma, const StateAssemblage& tau, const Matrix& u,
                                  double tol_order = 1e-7);

/// Squared objective sum_{x,a} ||tau - S U B U^dagger S||_F^2 with S = sqrt(rho_tau).
double order_objective(const StateAssemblage& sigma, const StateAssemblage& tau, const Matrix& u);

struct OrderVerdict {
  enum class Status { Holds, RefutedByRank, Unknown };
  Status status = Status::Unknown;
  /// First verified witness in restart order.
  std::optional<OrderWitness> witness;
  /// Verified witness with the smallest lambda_opt across all restarts.
  std::optional<OrderWitness> best;
  /// Smallest residual seen across restarts (verified or not).
  double best_residual = kInfinity;
  int verified_restarts = 0;
  int restarts_run = 0;
  Eigen::Index rank_sigma = 0;
  Eigen::Index rank_tau = 0;
};

std::string to_string(OrderVerdict::Status status);

/// Restart 0 starts at the identity, restart r > 0 at a Haar unitary drawn from
/// the stream (seed, r). Each restart runs gradient descent on U = exp(iH) U
/// with step halving, followed by a Gauss-Newton polish. Unknown is never a
/// refutation. Throws DimensionMismatch when the assemblages disagree in shape.
OrderVerdict search_order_witness(const StateAssemblage& sigma, const StateAssemblage& tau,
                                  const OrderConfig& config = {});

struct Equivalence {
  enum class Status { Equivalent, NotEquivalent, Unknown };
  Status status = Status::Unknown;
  std::optional<OrderWitness> witness;
  std::string reason;
  OrderVerdict forward;
  OrderVerdict backward;
};

std::string to_string(Equivalence::Status status);

/// Equivalent when both directions hold; NotEquivalent when the support ranks
/// differ (one direction is then refuted by rank); Unknown otherwise.
Equivalence seo_equivalent(const StateAssemblage& sigma, const StateAssemblage& tau, const OrderConfig& config = {});

}  // namespace distil
