#pragma once

// Unsteerability (LHS) and joint measurability (JM) as deterministic-strategy
// decompositions, the robustness measures built on them, and the
// steering-induced incompatibility lower bound.

#include "distil/assemblage.hpp"
#include "distil/sdp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace distil {

/// All functions x -> a, enumerated lexicographically with input 0 the most
/// significant digit: strategy l assigns a = table[l][x].
class DeterministicStrategySet {
 public:
  DeterministicStrategySet(std::size_t n_inputs, std::size_t n_outputs);

  std::size_t n_inputs() const { return n_inputs_; }
  std::size_t n_outputs() const { return n_outputs_; }
  std::size_t size() const { return table_.size(); }
  std::size_t output(std::size_t strategy, std::size_t x) const { return table_[strategy][x]; }
  /// D(a|x, strategy) in {0, 1}.
  bool responds(std::size_t strategy, std::size_t x, std::size_t a) const { return table_[strategy][x] == a; }

 private:
  std::size_t n_inputs_;
  std::size_t n_outputs_;
  std::vector<std::vector<std::size_t>> table_;
};

inline constexpr std::size_t kMaxStrategies = 1000000;

/// Throws TooManyStrategies when n_outputs^n_inputs exceeds kMaxStrategies.
DeterministicStrategySet enumerate_deterministic_strategies(std::size_t n_inputs, std::size_t n_outputs);

/// Solver settings used by every robustness and membership SDP.
sdp::Options robustness_solver_options();

struct Membership {
  bool member = false;
  /// sigma_l (or G_l) indexed by strategy, in the input's full space.
  std::vector<Matrix> decomposition;
  /// max entry of sum_l D(a|x,l) X_l - input_{a|x}.
  double reconstruction_error = 0.0;
  sdp::Solution certificate;
};

/// sigma_{a|x} = sum_l D(a|x,l) sigma_l with sigma_l >= 0.
Membership lhs_membership(const StateAssemblage& sigma);
/// E_{a|x} = sum_l D(a|x,l) G_l with G_l >= 0 (so sum_l G_l is the carrier).
Membership jm_membership(const MeasurementAssemblage& e);

/// Linear constraint sum_{x,a} tr(coefficients[x][a] omega_{a|x}) (rel) rhs on
/// a normalized noise assemblage omega.
struct NoiseConstraint {
  enum class Relation { Equal, LessEqual, GreaterEqual };
  Elements coefficients;
  Relation relation = Relation::Equal;
  double rhs = 0.0;
};

struct NoiseModel {
  enum class Kind { GeneralState, ConsistentState, GeneralMeasurement, Custom };
  Kind kind = Kind::GeneralState;
  /// Only read for Custom.
  std::vector<NoiseConstraint> constraints;

  static NoiseModel general_state() { return {Kind::GeneralState, {}}; }
  static NoiseModel consistent_state() { return {Kind::ConsistentState, {}}; }
  static NoiseModel general_measurement() { return {Kind::GeneralMeasurement, {}}; }
  static NoiseModel custom(std::vector<NoiseConstraint> constraints) { return {Kind::Custom, std::move(constraints)}; }
  /// Custom model pinning the noise to `noise` entry by entry.
  static NoiseModel fixed(const Elements& noise);
};

std::string to_string(NoiseModel::Kind kind);

struct RobustnessResult {
  /// Primal optimum, clamped at zero.
  double value = 0.0;
  /// Dual objective: a certified lower bound on the robustness.
  double lower_bound = 0.0;
  /// omega (or M) attaining the value; the input itself when the value is zero.
  Elements optimal_noise;
  /// Free decomposition of (input + value * noise) / (1 + value), by strategy.
  std::vector<Matrix> decomposition;
  /// Optimal dual operators F_{a|x} (full space): value >= sum tr(F input) - 1.
  Elements dual_witness;
  /// Multiplier of the normalization constraint (IR: sum_l G_l = c carrier;
  /// consistent SR: sum_l sigma_l = c rho_sigma), full space. Zero otherwise.
  Matrix balance_multiplier;
  sdp::Solution certificate;
};

/// min t such that (sigma + t omega)/(1 + t) is LHS for some assemblage omega.
RobustnessResult steering_robustness(const StateAssemblage& sigma);
/// Same with the noise restricted to rho_omega = rho_sigma.
RobustnessResult consistent_steering_robustness(const StateAssemblage& sigma);
/// min t such that (E + t M)/(1 + t) is JM for some measurement assemblage M on
/// the carrier of E.
RobustnessResult incompatibility_robustness(const MeasurementAssemblage& e);

/// Throws UnrepresentableNoiseModel when the model does not apply to the input
/// kind or a custom constraint is malformed. Custom models are solved in the
/// full space; built-in models on the support of the input.
RobustnessResult robustness_with_noise_model(const StateAssemblage& sigma, const NoiseModel& model,
                                             const sdp::Options& options = robustness_solver_options());
RobustnessResult robustness_with_noise_model(const MeasurementAssemblage& e, const NoiseModel& model,
                                             const sdp::Options& options = robustness_solver_options());

/// Dual point of the IR program turned into a density: for eta the returned
/// operator, SR(sqrt(eta) E sqrt(eta)) >= IR(E) up to solver accuracy.
Matrix incompatibility_dual_density(const RobustnessResult& ir, const MeasurementAssemblage& e);

enum class SteeringMeasure { SR, ConsistentSR };

struct InducedIncompatibilityConfig {
  int n_restarts = 8;
  int max_iters = 30;
  std::uint64_t seed = 0;
};

struct InducedIncompatibility {
  /// Best S(sqrt(eta) U E U^dagger sqrt(eta)) found; a lower bound on I_S(E).
  double lower_bound = 0.0;
  Matrix eta;
  Matrix u;
  int evaluations = 0;
};

/// Lower bound on max over (eta, U) of S(sqrt(eta) U E U^dagger sqrt(eta)).
/// Seeds: eta = carrier / rank with U = I (always), the IR dual density
/// (SR measure), then random starts. For the SR measure every start is
/// improved by maximizing the linearization sum tr(F sigma) over the operator
/// T = sqrt(eta) U restricted to the carrier, which never decreases SR.
InducedIncompatibility steering_induced_incompatibility(const MeasurementAssemblage& e, SteeringMeasure measure,
                                                        const InducedIncompatibilityConfig& config = {});

/// sigma_{a|x} = T E_{a|x} T^dagger / tr(T carrier T^dagger).
StateAssemblage induced_assemblage(const MeasurementAssemblage& e, const Matrix& t);

}  // namespace distil
