#pragma once

// The qubit-qutrit filtering example: rho_AB(v), Pauli Z/X on the untrusted
// qubit, and the filter onto the qubit block of the trusted qutrit.

#include "distil/assemblage.hpp"
#include "distil/filters.hpp"

namespace distil::demo {

struct QubitQutritTrace {
  double v = 0.0;
  StateAssemblage sigma;
  Matrix filter;
  StateAssemblage filtered;
  double p_succ = 0.0;
  /// max entry of filtered - (E^Pauli / 2 in the qubit block).
  double final_error = 0.0;
  /// 2^{-D_max} for the identity witness.
  double p_max = 0.0;
  double sr_before = 0.0;
  double sr_after = 0.0;
  double src_before = 0.0;
  double src_after = 0.0;
  double ir_seo = 0.0;
  Eigen::Index seo_rank = 0;
};

/// Throws DomainError unless v lies in (0, 1]. With_robustness = false skips
/// the four SDP-based fields.
QubitQutritTrace run_qubit_qutrit_example(double v, bool with_robustness = true);

}  // namespace distil::demo
