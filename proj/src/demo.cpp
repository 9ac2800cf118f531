#include "distil/demo.hpp"

#include "distil/instances.hpp"
#include "distil/robustness.hpp"

namespace distil::demo {

QubitQutritTrace run_qubit_qutrit_example(double v, bool with_robustness) {
  StateAssemblage sigma = instances::qubit_qutrit_assemblage(v);
  const Matrix k = instances::qubit_block_filter();
  FilterOutcome out = apply_filter(sigma, k);
  QubitQutritTrace t{v, sigma, k, out.output, out.p_succ};
  t.final_error = max_entry_difference(out.output.elements(), instances::embedded_pauli_assemblage().elements());
  t.p_max = max_success_probability(sigma, out.output, {identity(3)}).p_max;
  const MeasurementAssemblage seo = compute_seo(sigma);
  t.seo_rank = seo.carrier_rank();
  if (with_robustness) {
    t.sr_before = steering_robustness(sigma).value;
    t.sr_after = steering_robustness(out.output).value;
    t.src_before = consistent_steering_robustness(sigma).value;
    t.src_after = consistent_steering_robustness(out.output).value;
    t.ir_seo = incompatibility_robustness(seo).value;
  }
  return t;
}

}  // namespace distil::demo
