#pragma once

#include "distil/linalg.hpp"

#include <limits>

namespace distil {

/// A real value that may be +infinity (IEEE infinity marks the unbounded case).
using ExtendedReal = double;

inline constexpr ExtendedReal kInfinity = std::numeric_limits<double>::infinity();

/// D_max(eta || rho) = log2 min{lambda >= 0 : eta <= lambda rho}, or +infinity
/// when supp(eta) is not inside supp(rho). Both arguments must be densities.
ExtendedReal dmax(const Matrix& eta, const Matrix& rho);

/// min{lambda >= 0 : rho_target <= lambda rho_reference} = 2^dmax.
ExtendedReal lambda_opt(const Matrix& rho_target, const Matrix& rho_reference);

}  // namespace distil
