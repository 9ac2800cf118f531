#include "distil/maxrelent.hpp"

#include "distil/errors.hpp"

#include <cmath>
#include <sstream>

namespace distil {

namespace {

constexpr double kTraceTol = 1e-9;

void require_density(const Matrix& rho, const char* what) {
  require_hermitian(rho, what);
  const double lmin = min_eigenvalue(rho);
  if (lmin < -tol::kPsdFloor) {
    std::ostringstream os;
    os << what << ": eigenvalue " << lmin;
    throw NegativeOperator(os.str());
  }
  const double tr = real_trace(rho);
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << what << ": trace " << tr;
    throw NonUnitTrace(os.str());
  }
}

}  // namespace

ExtendedReal lambda_opt(const Matrix& rho_target, const Matrix& rho_reference) {
  if (rho_target.rows() != rho_reference.rows())
    throw DimensionMismatch("max-relative entropy: densities differ in dimension");
  require_density(rho_target, "target density");
  require_density(rho_reference, "reference density");

  // Support inclusion is decided on projectors, not inside the compression.
  if (support_excess(support_projector(rho_target), support_projector(rho_reference)) >
      tol::kSupportInclusion)
    return kInfinity;

  const Matrix root_inv = sqrt_pinv(rho_reference);
  return max_eigenvalue(root_inv * rho_target * root_inv);
}

ExtendedReal dmax(const Matrix& eta, const Matrix& rho) {
  const ExtendedReal lambda = lambda_opt(eta, rho);
  return std::isinf(lambda) ? kInfinity : std::log2(lambda);
}

}  // namespace distil
