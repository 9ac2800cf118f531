#pragma once

// Fixed instances: Pauli Z/X measurements and the qubit-qutrit family
// rho_AB(v) = v |phi+><phi+| + (1 - v) I_A/2 (x) |2><2|.

#include "distil/assemblage.hpp"

namespace distil::instances {

/// x = 0: Z eigenprojectors, x = 1: X eigenprojectors; a = 0 is the +1 outcome.
MeasurementAssemblage pauli_measurements();
/// E^Pauli / 2 on the qubit.
StateAssemblage pauli_state_assemblage();
/// Throws DomainError unless v lies in [0, 1].
BipartiteState qubit_qutrit_state(double v);
/// Assemblage steered from qubit_qutrit_state(v) by pauli_measurements();
/// throws DomainError unless v lies in (0, 1].
StateAssemblage qubit_qutrit_assemblage(double v);
/// |0><0| + |1><1| on the qutrit.
Matrix qubit_block_filter();
/// E^Pauli / 2 placed in the qubit block of the qutrit.
StateAssemblage embedded_pauli_assemblage();

}  // namespace distil::instances
