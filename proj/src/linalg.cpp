#include "distil/linalg.hpp"

#include "distil/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace distil {

namespace {

// Shared PSD gate for sqrt_pinv / matrix_sqrt / support_projector.
void require_psd(const Spectrum& s, const char* what) {
  const double lmax = s.size() > 0 ? s.values(0) : 0.0;
  const double lmin = s.size() > 0 ? s.values(s.size() - 1) : 0.0;
  const double floor = -tol::kNegativeRel * std::max(lmax, 1e-14);
  if (lmin < floor) {
    std::ostringstream os;
    os << what << ": minimal eigenvalue " << lmin << " below floor " << floor;
    throw NegativeOperator(os.str());
  }
}

Eigen::Index count_support(const Spectrum& s, double rel_tol) {
  if (s.size() == 0 || s.values(0) <= 0.0) return 0;
  const double cut = rel_tol * s.values(0);
  Eigen::Index r = 0;
  while (r < s.size() && s.values(r) > cut) ++r;
  return r;
}

}  // namespace

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Vector ket(Eigen::Index dim, Eigen::Index i) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

Matrix outer(const Vector& a, const Vector& b) { return a * b.adjoint(); }

Matrix projector(const Vector& psi) { return psi * psi.adjoint(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace_first(const Matrix& rho, Eigen::Index dim_a, Eigen::Index dim_b) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b)
    throw DimensionMismatch("partial trace: operator is not (dim_a*dim_b)-square");
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Eigen::Index i = 0; i < dim_a; ++i) out += rho.block(i * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

Matrix embed(const Matrix& small, Eigen::Index dim) {
  Matrix out = Matrix::Zero(dim, dim);
  out.topLeftCorner(small.rows(), small.cols()) = small;
  return out;
}

double hermiticity_defect(const Matrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& h, double tolerance) { return hermiticity_defect(h) <= tolerance; }

void require_hermitian(const Matrix& h, const char* what) {
  const double defect = hermiticity_defect(h);
  if (!(defect <= tol::kHermitian)) {
    std::ostringstream os;
    os << what << ": Hermiticity defect " << defect;
    throw NonHermitianInput(os.str());
  }
}

Matrix hermitian_part(const Matrix& h) { return 0.5 * (h + h.adjoint()); }

double real_trace(const Matrix& h) { return h.trace().real(); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double min_eigenvalue(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(h.rows() - 1);
}

double unitarity_defect(const Matrix& u) {
  return max_abs(u.adjoint() * u - identity(u.cols()));
}

Spectrum spectral_decompose(const Matrix& h) {
  require_hermitian(h, "spectral_decompose");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  Spectrum s;
  s.values = es.eigenvalues().reverse();
  s.vectors = es.eigenvectors().rowwise().reverse();
  return s;
}

Matrix support_basis(const Matrix& h, double rel_tol) {
  const Spectrum s = spectral_decompose(h);
  require_psd(s, "support");
  return s.vectors.leftCols(count_support(s, rel_tol));
}

Matrix support_projector(const Matrix& h, double rel_tol) {
  const Matrix v = support_basis(h, rel_tol);
  return v * v.adjoint();
}

Eigen::Index support_rank(const Matrix& h, double rel_tol) {
  const Spectrum s = spectral_decompose(h);
  require_psd(s, "support_rank");
  return count_support(s, rel_tol);
}

double support_excess(const Matrix& inner_projector, const Matrix& outer_projector) {
  const Matrix complement = identity(outer_projector.rows()) - outer_projector;
  return (complement * inner_projector).norm();
}

Matrix sqrt_pinv(const Matrix& h, double rel_tol) {
  const Spectrum s = spectral_decompose(h);
  require_psd(s, "sqrt_pinv");
  const Eigen::Index r = count_support(s, rel_tol);
  const Matrix v = s.vectors.leftCols(r);
  const RealVector inv = s.values.head(r).cwiseSqrt().cwiseInverse();
  return hermitian_part(v * inv.cast<Complex>().asDiagonal() * v.adjoint());
}

Matrix matrix_sqrt(const Matrix& h) {
  const Spectrum s = spectral_decompose(h);
  require_psd(s, "matrix_sqrt");
  const RealVector root = s.values.cwiseMax(0.0).cwiseSqrt();
  return hermitian_part(s.vectors * root.cast<Complex>().asDiagonal() * s.vectors.adjoint());
}

Polar polar_decompose(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("polar_decompose: operator is not square");
  const Eigen::Index n = a.rows();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double smax = n > 0 ? sv(0) : 0.0;
  Eigen::Index r = 0;
  while (r < n && sv(r) > tol::kSupport * smax) ++r;

  const Matrix& w = svd.matrixU();
  const Matrix& v = svd.matrixV();
  Polar out;
  out.positive = hermitian_part(v * sv.cast<Complex>().asDiagonal() * v.adjoint());
  out.unitary = w.leftCols(r) * v.leftCols(r).adjoint();
  if (r < n) {
    // Map ker(P) onto range(A)^perp by the polar factor of their overlap, so
    // the completion acts as the identity whenever the two subspaces coincide.
    const Matrix wk = w.rightCols(n - r);
    const Matrix vk = v.rightCols(n - r);
    const Matrix overlap = wk.adjoint() * vk;
    Eigen::JacobiSVD<Matrix> osvd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix q = osvd.matrixU() * osvd.matrixV().adjoint();
    out.unitary += wk * q * vk.adjoint();
  }
  return out;
}

Matrix expi_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  const Eigen::VectorXcd phases =
      (Complex(0.0, 1.0) * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace distil
