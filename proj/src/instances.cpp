#include "distil/instances.hpp"

#include "distil/errors.hpp"

#include <cmath>
#include <sstream>

namespace distil::instances {

MeasurementAssemblage pauli_measurements() {
  Vector plus(2), minus(2);
  plus << 1.0, 1.0;
  minus << 1.0, -1.0;
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  Elements e{{projector(ket(2, 0)), projector(ket(2, 1))}, {projector(plus), projector(minus)}};
  return MeasurementAssemblage(std::move(e));
}

StateAssemblage pauli_state_assemblage() {
  return StateAssemblage(scale_elements(pauli_measurements().elements(), 0.5));
}

BipartiteState qubit_qutrit_state(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << "mixing weight v = " << v << " outside [0, 1]";
    throw DomainError(os.str());
  }
  Vector phi = Vector::Zero(6);
  phi(0) = 1.0 / std::sqrt(2.0);  // |0>|0>
  phi(4) = 1.0 / std::sqrt(2.0);  // |1>|1>
  const Matrix noise = kron(0.5 * identity(2), projector(ket(3, 2)));
  return BipartiteState(hermitian_part(v * projector(phi) + (1.0 - v) * noise), 2, 3);
}

StateAssemblage qubit_qutrit_assemblage(double v) {
  if (!(v > 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << "mixing weight v = " << v << " outside (0, 1]";
    throw DomainError(os.str());
  }
  return steer_from_state(qubit_qutrit_state(v), pauli_measurements());
}

Matrix qubit_block_filter() {
  Matrix k = Matrix::Zero(3, 3);
  k(0, 0) = 1.0;
  k(1, 1) = 1.0;
  return k;
}

StateAssemblage embedded_pauli_assemblage() {
  Elements e = pauli_state_assemblage().elements();
  for (auto& row : e)
    for (auto& m : row) m = embed(m, 3);
  return StateAssemblage(std::move(e));
}

}  // namespace distil::instances
