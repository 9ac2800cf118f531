#pragma once

// Single-Kraus local filters on the trusted side: sigma -> K sigma K^dagger / p.

#include "distil/assemblage.hpp"
#include "distil/maxrelent.hpp"

#include <optional>
#include <vector>

namespace distil {

struct FilterKraus {
  Matrix k;
  /// lambda_min(I - K^dagger K).
  double contraction_slack = 0.0;
  /// Set for synthesized filters: 2^{D_max(rho_tau || U rho_sigma U^dagger)}.
  std::optional<ExtendedReal> lambda_opt;

  /// Throws ContractionViolation when K^dagger K exceeds I beyond 1e-9.
  static FilterKraus from_operator(Matrix k);
};

struct FilterOutcome {
  StateAssemblage output;
  double p_succ = 0.0;
};

/// Throws ContractionViolation, DimensionMismatch, or VanishingSuccessProbability
/// when tr(K rho_sigma K^dagger) <= 1e-12.
FilterOutcome apply_filter(const StateAssemblage& sigma, const FilterKraus& filter);
FilterOutcome apply_filter(const StateAssemblage& sigma, const Matrix& k);

/// L = lambda_opt^{-1/2} sqrt(rho_tau) U sqrt(rho_sigma)^{-1}. Throws
/// SupportViolation when supp(rho_tau) is not inside supp(U rho_sigma U^dagger)
/// and InvalidWitness when U fails verify_order_witness.
FilterKraus synthesize_filter(const StateAssemblage& sigma, const StateAssemblage& tau, const Matrix& u,
                              double tol_order = 1e-7);

struct SuccessBound {
  double p_max = 0.0;
  std::size_t best_index = 0;
  Matrix best_witness;
};

/// max over the witnesses of 2^{-D_max(rho_tau || U rho_sigma U^dagger)}; ties go
/// to the lowest index. Throws EmptyWitnessList, or InvalidWitness when a
/// witness fails verification.
SuccessBound max_success_probability(const StateAssemblage& sigma, const StateAssemblage& tau,
                                     const std::vector<Matrix>& witnesses, double tol_order = 1e-7);

}  // namespace distil
