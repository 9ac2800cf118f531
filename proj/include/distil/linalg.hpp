#pragma once

// Dense complex linear algebra used throughout the library. Hermitian and
// general operators share the Eigen::MatrixXcd carrier; functions that need
// Hermiticity check it on entry.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace distil {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
/// Max absolute deviation |H_ij - conj(H_ji)| accepted for Hermitian input.
inline constexpr double kHermitian = 1e-10;
/// Relative eigenvalue cutoff deciding the support of a PSD operator.
inline constexpr double kSupport = 1e-10;
/// Relative negativity floor for PSD operators (scaled by lambda_max).
inline constexpr double kNegativeRel = 1e-9;
/// Absolute negativity floor for assemblage elements.
inline constexpr double kPsdFloor = 1e-9;
/// Projector-comparison tolerance for support inclusion tests.
inline constexpr double kSupportInclusion = 1e-8;
}  // namespace tol

/// Eigen-decomposition of a Hermitian operator, eigenvalues sorted descending.
/// Column i of `vectors` is the eigenvector for `values[i]`.
struct Spectrum {
  RealVector values;
  Matrix vectors;

  Eigen::Index size() const { return values.size(); }
  Vector vector(Eigen::Index i) const { return vectors.col(i); }
};

struct Polar {
  Matrix unitary;
  Matrix positive;
};

Matrix identity(Eigen::Index dim);
/// Computational basis ket |i> in dimension dim.
Vector ket(Eigen::Index dim, Eigen::Index i);
Matrix outer(const Vector& a, const Vector& b);
Matrix projector(const Vector& psi);
Matrix kron(const Matrix& a, const Matrix& b);
/// tr_A of an operator on H_A (x) H_B.
Matrix partial_trace_first(const Matrix& rho, Eigen::Index dim_a, Eigen::Index dim_b);
/// Embeds `small` as the leading principal block of a dim x dim zero matrix.
Matrix embed(const Matrix& small, Eigen::Index dim);

double hermiticity_defect(const Matrix& h);
bool is_hermitian(const Matrix& h, double tolerance = tol::kHermitian);
/// Throws NonHermitianInput when the defect exceeds tol::kHermitian.
void require_hermitian(const Matrix& h, const char* what);
Matrix hermitian_part(const Matrix& h);
double real_trace(const Matrix& h);
double max_abs(const Matrix& m);
/// Smallest eigenvalue of a Hermitian matrix (its Hermitian part, to be exact).
double min_eigenvalue(const Matrix& h);
double max_eigenvalue(const Matrix& h);
/// max |U^dagger U - I|.
double unitarity_defect(const Matrix& u);

Spectrum spectral_decompose(const Matrix& h);

/// Projector onto the eigenspaces with eigenvalue > rel_tol * lambda_max.
Matrix support_projector(const Matrix& h, double rel_tol = tol::kSupport);
/// Orthonormal basis (as columns) of the support, same cutoff as above.
Matrix support_basis(const Matrix& h, double rel_tol = tol::kSupport);
Eigen::Index support_rank(const Matrix& h, double rel_tol = tol::kSupport);
/// ||(I - P_outer) P_inner||_F, zero when range(P_inner) lies inside range(P_outer).
double support_excess(const Matrix& inner_projector, const Matrix& outer_projector);

/// Pseudo-inverse square root: H^{-1/2} on supp(H), zero elsewhere.
Matrix sqrt_pinv(const Matrix& h, double rel_tol = tol::kSupport);
Matrix matrix_sqrt(const Matrix& h);

/// A = U P with P = sqrt(A^dagger A). On ker(P) the unitary is completed by the
/// unitary closest to the identity between ker(P) and range(A)^perp.
Polar polar_decompose(const Matrix& a);

/// exp(i H) for Hermitian H.
Matrix expi_hermitian(const Matrix& h);

}  // namespace distil
