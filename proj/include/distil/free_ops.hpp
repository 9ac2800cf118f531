#pragma once

// Free operations of the steering and incompatibility resource theories:
// classical pre/post-processing with shared randomness, plus (for steering)
// an instrument on the trusted side.

#include "distil/assemblage.hpp"
#include "distil/random.hpp"

#include <cstddef>
#include <vector>

namespace distil {

using Distribution = std::vector<double>;

/// Indices: w labels the shared randomness, x' and a' the new input/outcome.
struct FreeOpSpec {
  /// p(w); only read by the measurement map.
  Distribution omega;
  /// [w][x'] -> p(x | x', w) over the original inputs.
  std::vector<std::vector<Distribution>> input_choice;
  /// [w][x'][x][a] -> p(a' | a, x, x', w) over the new outcomes.
  std::vector<std::vector<std::vector<std::vector<Distribution>>>> relabel;
  /// [w] -> Kraus operators of the instrument branch; only read by the state map.
  std::vector<std::vector<Matrix>> instrument;

  std::size_t n_branches() const { return input_choice.size(); }
  std::size_t n_new_inputs() const;
  std::size_t n_new_outputs() const;
};

/// Tolerances pinned by the validity checks.
inline constexpr double kDistributionTol = 1e-10;
inline constexpr double kInstrumentTol = 1e-9;

/// E'_{a'|x'} = sum p(w) p(x|x',w) p(a'|a,x,x',w) E_{a|x}. Keeps the carrier.
/// Throws MalformedDistribution on unnormalized, negative or mis-sized tables.
MeasurementAssemblage apply_incompatibility_free_op(const MeasurementAssemblage& e, const FreeOpSpec& op);

/// sigma'_{a'|x'} = sum p(x|x',w) p(a'|a,x,x',w) Ecal_w(sigma_{a|x}) with
/// Ecal_w(X) = sum_k K X K^dagger. Throws MalformedInstrument unless
/// sum_w sum_k K^dagger K = I within kInstrumentTol, MalformedDistribution as above.
StateAssemblage apply_steering_free_op(const StateAssemblage& sigma, const FreeOpSpec& op);

/// Identity relabelling with a single branch; instrument is the identity map
/// when dim > 0.
FreeOpSpec identity_free_op(std::size_t n_inputs, std::size_t n_outputs, Eigen::Index dim = 0);

struct RandomFreeOpShape {
  std::size_t n_inputs = 2;
  std::size_t n_outputs = 2;
  std::size_t n_new_inputs = 2;
  std::size_t n_new_outputs = 2;
  std::size_t n_branches = 2;
  /// Instrument input dimension; 0 leaves the instrument empty.
  Eigen::Index dim = 0;
  Eigen::Index dim_out = 0;  // 0 means dim
  std::size_t kraus_per_branch = 1;
};

/// Random distributions everywhere; the instrument is cut from a Haar-like isometry.
FreeOpSpec random_free_op(random::Engine& rng, const RandomFreeOpShape& shape);

}  // namespace distil
