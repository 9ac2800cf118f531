#include "distil/filters.hpp"

#include "distil/errors.hpp"
#include "distil/ordering.hpp"

#include <cmath>
#include <sstream>

namespace distil {

namespace {

constexpr double kContractionFloor = 1e-9;
constexpr double kVanishing = 1e-12;

double slack_of(const Matrix& k) {
  return min_eigenvalue(identity(k.cols()) - hermitian_part(k.adjoint() * k));
}

}  // namespace

FilterKraus FilterKraus::from_operator(Matrix k) {
  if (k.rows() != k.cols()) throw DimensionMismatch("filter Kraus operator must be square");
  FilterKraus f;
  f.contraction_slack = slack_of(k);
  f.k = std::move(k);
  if (f.contraction_slack < -kContractionFloor) {
    std::ostringstream os;
    os << "K^dagger K exceeds the identity by " << -f.contraction_slack;
    throw ContractionViolation(os.str());
  }
  return f;
}

FilterOutcome apply_filter(const StateAssemblage& sigma, const FilterKraus& filter) {
  if (filter.k.cols() != sigma.dim() || filter.k.rows() != sigma.dim())
    throw DimensionMismatch("filter dimension differs from the assemblage dimension");
  const double slack = slack_of(filter.k);
  if (slack < -kContractionFloor) {
    std::ostringstream os;
    os << "K^dagger K exceeds the identity by " << -slack;
    throw ContractionViolation(os.str());
  }
  const double p = real_trace(filter.k * reduced_state(sigma) * filter.k.adjoint());
  if (!(p > kVanishing)) {
    std::ostringstream os;
    os << "success probability " << p;
    throw VanishingSuccessProbability(os.str());
  }
  Elements out = conjugate_elements(sigma.elements(), filter.k);
  return FilterOutcome{StateAssemblage(scale_elements(out, 1.0 / p)), p};
}

FilterOutcome apply_filter(const StateAssemblage& sigma, const Matrix& k) {
  return apply_filter(sigma, FilterKraus::from_operator(k));
}

FilterKraus synthesize_filter(const StateAssemblage& sigma, const StateAssemblage& tau, const Matrix& u,
                              double tol_order) {
  const WitnessCheck check = verify_order_witness(sigma, tau, u, tol_order);
  if (check.outcome == WitnessCheck::Outcome::SupportFailure) throw SupportViolation(check.reason);
  if (!check.accepted()) throw InvalidWitness(check.reason);

  const Matrix rho_sigma = reduced_state(sigma);
  const Matrix rho_tau = reduced_state(tau);
  const double lambda = check.witness.lambda_opt;
  Matrix l = (1.0 / std::sqrt(lambda)) * matrix_sqrt(rho_tau) * u * sqrt_pinv(rho_sigma);

  // Rounding can push the top singular value marginally above one.
  Eigen::JacobiSVD<Matrix> svd(l);
  const double top = svd.singularValues()(0);
  if (top > 1.0) l /= top * (1.0 + 1e-12);

  FilterKraus f = FilterKraus::from_operator(std::move(l));
  f.lambda_opt = lambda;
  return f;
}

SuccessBound max_success_probability(const StateAssemblage& sigma, const StateAssemblage& tau,
                                     const std::vector<Matrix>& witnesses, double tol_order) {
  if (witnesses.empty()) throw EmptyWitnessList("no witness unitaries supplied");
  SuccessBound best;
  best.p_max = -1.0;
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    const WitnessCheck check = verify_order_witness(sigma, tau, witnesses[i], tol_order);
    if (!check.accepted()) {
      std::ostringstream os;
      os << "witness " << i << ": " << check.reason;
      throw InvalidWitness(os.str());
    }
    const double p = 1.0 / check.witness.lambda_opt;
    if (p > best.p_max) {
      best.p_max = p;
      best.best_index = i;
      best.best_witness = witnesses[i];
    }
  }
  return best;
}

}  // namespace distil
