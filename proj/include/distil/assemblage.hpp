#pragma once

// State and measurement assemblages. Elements are indexed [x][a] (input, then
// outcome), zero-based. Both types are immutable once built; construction only
// checks shape, the validate_* functions report the physical invariants.

#include "distil/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace distil {

using Elements = std::vector<std::vector<Matrix>>;

/// Shape-checked [x][a] family of square operators of a common dimension.
class AssemblageShape {
 public:
  explicit AssemblageShape(Elements elements);

  Eigen::Index dim() const { return dim_; }
  std::size_t n_inputs() const { return elements_.size(); }
  std::size_t n_outputs() const { return elements_.front().size(); }
  const Matrix& operator()(std::size_t x, std::size_t a) const { return elements_[x][a]; }
  const Elements& elements() const { return elements_; }

 private:
  Elements elements_;
  Eigen::Index dim_ = 0;
};

class StateAssemblage : public AssemblageShape {
 public:
  explicit StateAssemblage(Elements elements) : AssemblageShape(std::move(elements)) {}
};

class MeasurementAssemblage : public AssemblageShape {
 public:
  /// Carrier defaults to the identity of the full space.
  explicit MeasurementAssemblage(Elements elements);
  MeasurementAssemblage(Elements elements, Matrix carrier_projector);

  const Matrix& carrier() const { return carrier_; }
  Eigen::Index carrier_rank() const;

 private:
  Matrix carrier_;
};

class BipartiteState {
 public:
  /// Throws DimensionMismatch on shape errors, NegativeOperator/NonUnitTrace on
  /// invalid densities.
  BipartiteState(Matrix rho, Eigen::Index dim_a, Eigen::Index dim_b);

  Eigen::Index dim_a() const { return dim_a_; }
  Eigen::Index dim_b() const { return dim_b_; }
  const Matrix& rho() const { return rho_; }

 private:
  Matrix rho_;
  Eigen::Index dim_a_;
  Eigen::Index dim_b_;
};

struct Violation {
  enum class Kind { NonHermitian, NotPositive, Signalling, TraceMismatch, Completeness, Carrier };
  Kind kind;
  std::size_t x = 0;
  std::size_t a = 0;
  double magnitude = 0.0;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

std::string describe(const ValidationReport& report);

ValidationReport validate_state_assemblage(const StateAssemblage& sigma);
ValidationReport validate_measurement_assemblage(const MeasurementAssemblage& e);

/// rho_sigma = sum_a sigma_{a|x}, averaged over x. Throws NoSignallingViolation
/// when the x-dependence exceeds 1e-7.
Matrix reduced_state(const StateAssemblage& sigma);

/// sigma_{a|x} = tr_A[(E_{a|x} (x) 1) rho_AB].
StateAssemblage steer_from_state(const BipartiteState& rho_ab, const MeasurementAssemblage& e);

/// Steering-equivalent observables B_{a|x} = rho^{-1/2} sigma_{a|x} rho^{-1/2},
/// carried by supp(rho_sigma).
MeasurementAssemblage compute_seo(const StateAssemblage& sigma);

/// tau_{a|x} = sqrt(rho) U E_{a|x} U^dagger sqrt(rho). Throws SupportViolation
/// unless supp(rho) lies inside U supp(carrier) U^dagger.
StateAssemblage assemblage_from_seo(const MeasurementAssemblage& e, const Matrix& rho,
                                    const Matrix& u);

/// Elementwise O x O^dagger with the same O for every element.
Elements conjugate_elements(const Elements& elements, const Matrix& o);
Elements scale_elements(const Elements& elements, double factor);
/// max over x, a of max |A_{a|x} - B_{a|x}|; infinity on shape mismatch.
double max_entry_difference(const Elements& lhs, const Elements& rhs);
/// Sum over x, a of ||A_{a|x} - B_{a|x}||_F.
double summed_frobenius_difference(const Elements& lhs, const Elements& rhs);

}  // namespace distil
