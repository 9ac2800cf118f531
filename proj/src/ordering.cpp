#include "distil/ordering.hpp"

#include "distil/errors.hpp"
#include "distil/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace distil {

namespace {

constexpr double kUnitaryTol = 1e-9;

void require_same_shape(const StateAssemblage& sigma, const StateAssemblage& tau) {
  if (sigma.dim() != tau.dim() || sigma.n_inputs() != tau.n_inputs() || sigma.n_outputs() != tau.n_outputs()) {
    std::ostringstream os;
    os << "assemblages differ in shape: (" << sigma.dim() << ", " << sigma.n_inputs() << ", "
       << sigma.n_outputs() << ") vs (" << tau.dim() << ", " << tau.n_inputs() << ", " << tau.n_outputs() << ")";
    throw DimensionMismatch(os.str());
  }
}

std::vector<Matrix> flatten(const Elements& e) {
  std::vector<Matrix> out;
  for (const auto& row : e)
    for (const auto& m : row) out.push_back(m);
  return out;
}

// Fixed data of one search: SEO of sigma, tau and sqrt(rho_tau).
struct Landscape {
  std::vector<Matrix> seo;
  std::vector<Matrix> target;
  Matrix root;

  Landscape(const StateAssemblage& sigma, const StateAssemblage& tau)
      : seo(flatten(compute_seo(sigma).elements())),
        target(flatten(tau.elements())),
        root(matrix_sqrt(reduced_state(tau))) {}

  Matrix residual(const Matrix& u, std::size_t k) const {
    return target[k] - root * u * seo[k] * u.adjoint() * root;
  }

  double objective(const Matrix& u) const {
    double f = 0.0;
    for (std::size_t k = 0; k < seo.size(); ++k) f += residual(u, k).squaredNorm();
    return f;
  }

  // Gradient with respect to H in U -> exp(iH) U, as a Hermitian matrix.
  Matrix gradient(const Matrix& u) const {
    const Complex i(0.0, 1.0);
    Matrix g = Matrix::Zero(u.rows(), u.cols());
    for (std::size_t k = 0; k < seo.size(); ++k) {
      const Matrix c = u * seo[k] * u.adjoint();
      const Matrix m = root * (target[k] - root * c * root) * root;
      g -= 2.0 * i * (c * m - m * c);
    }
    return hermitian_part(g);
  }
};

// Orthonormal Hermitian basis of the Lie algebra u(d).
std::vector<Matrix> lie_basis(Eigen::Index d) {
  std::vector<Matrix> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      Matrix re = Matrix::Zero(d, d);
      re(i, j) = re(j, i) = r;
      basis.push_back(re);
      Matrix im = Matrix::Zero(d, d);
      im(i, j) = Complex(0.0, -r);
      im(j, i) = Complex(0.0, r);
      basis.push_back(im);
    }
  return basis;
}

Matrix descend(const Landscape& land, Matrix u, int max_iters, double target) {
  double f = land.objective(u);
  double alpha = 1.0;
  for (int it = 0; it < max_iters && f > target; ++it) {
    const Matrix g = land.gradient(u);
    if (g.norm() < 1e-15) break;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      const Matrix trial = expi_hermitian(-alpha * g) * u;
      const double ft = land.objective(trial);
      if (ft < f) {
        u = trial;
        f = ft;
        alpha = std::min(alpha * 2.0, 1e6);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  return u;
}

// Levenberg-Marquardt on the Lie-algebra coordinates around the current U.
Matrix polish(const Landscape& land, Matrix u, int max_iters) {
  const Eigen::Index d = u.rows();
  const std::vector<Matrix> basis = lie_basis(d);
  const Eigen::Index np = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index block = 2 * d * d;
  const Eigen::Index nr = block * static_cast<Eigen::Index>(land.seo.size());
  const Complex i(0.0, 1.0);

  auto pack = [d, block](const Matrix& m, Eigen::VectorXd& v, Eigen::Index k) {
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r = 0; r < d; ++r) {
        v(k * block + 2 * (c * d + r)) = m(r, c).real();
        v(k * block + 2 * (c * d + r) + 1) = m(r, c).imag();
      }
  };

  double f = land.objective(u);
  double mu = -1.0;
  for (int it = 0; it < max_iters && f > 1e-30; ++it) {
    Eigen::VectorXd res(nr);
    Eigen::MatrixXd jac(nr, np);
    for (std::size_t k = 0; k < land.seo.size(); ++k) {
      const Matrix c = u * land.seo[k] * u.adjoint();
      pack(land.residual(u, k), res, static_cast<Eigen::Index>(k));
      for (Eigen::Index p = 0; p < np; ++p) {
        const Matrix dr = -land.root * (i * (basis[p] * c - c * basis[p])) * land.root;
        Eigen::VectorXd col(nr);
        pack(dr, col, 0);
        jac.block(static_cast<Eigen::Index>(k) * block, p, block, 1) = col.head(block);
      }
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * res;
    if (mu < 0.0) mu = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-12);
    bool accepted = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu;
      const Eigen::VectorXd step = lhs.ldlt().solve(-jtr);
      Matrix h = Matrix::Zero(d, d);
      for (Eigen::Index p = 0; p < np; ++p) h += step(p) * basis[p];
      const Matrix trial = expi_hermitian(h) * u;
      const double ft = land.objective(trial);
      if (ft < f) {
        u = trial;
        f = ft;
        mu = std::max(mu / 3.0, 1e-15);
        accepted = true;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) break;
  }
  // Re-unitarize against drift from repeated products.
  return polar_decompose(u).unitary;
}

}  // namespace

double order_objective(const StateAssemblage& sigma, const StateAssemblage& tau, const Matrix& u) {
  require_same_shape(sigma, tau);
  return Landscape(sigma, tau).objective(u);
}

WitnessCheck verify_order_witness(const StateAssemblage& sigma, const StateAssemblage& tau, const Matrix& u,
                                  double tol_order) {
  require_same_shape(sigma, tau);
  if (u.rows() != sigma.dim() || u.cols() != sigma.dim())
    throw DimensionMismatch("witness unitary does not match the assemblage dimension");

  WitnessCheck out;
  out.witness.u = u;
  const double defect = unitarity_defect(u);
  if (defect > kUnitaryTol) {
    out.outcome = WitnessCheck::Outcome::NotUnitary;
    std::ostringstream os;
    os << "U is not unitary (defect " << defect << ")";
    out.reason = os.str();
    out.witness.residual = kInfinity;
    return out;
  }

  const Matrix rho_sigma = reduced_state(sigma);
  const Matrix rho_tau = reduced_state(tau);
  const Matrix rotated = hermitian_part(u * rho_sigma * u.adjoint());
  const Matrix p_tau = support_projector(rho_tau);
  out.support_excess = support_excess(p_tau, support_projector(rotated));

  const MeasurementAssemblage seo = compute_seo(sigma);
  const Matrix root = matrix_sqrt(rho_tau);
  double residual = 0.0;
  for (std::size_t x = 0; x < sigma.n_inputs(); ++x)
    for (std::size_t a = 0; a < sigma.n_outputs(); ++a)
      residual += (tau(x, a) - root * u * seo(x, a) * u.adjoint() * root).norm();
  out.witness.residual = residual;

  if (out.support_excess > tol::kSupportInclusion) {
    out.outcome = WitnessCheck::Outcome::SupportFailure;
    std::ostringstream os;
    os << "supp(rho_tau) leaves supp(U rho_sigma U^dagger) by " << out.support_excess;
    out.reason = os.str();
    return out;
  }
  out.witness.lambda_opt = lambda_opt(rho_tau, rotated);

  // SEO of tau against the compression of U B U^dagger to supp(rho_tau). The
  // entry error is the residual amplified by at most 1 / lambda_min^+(rho_tau).
  const MeasurementAssemblage seo_tau = compute_seo(tau);
  for (std::size_t x = 0; x < sigma.n_inputs(); ++x)
    for (std::size_t a = 0; a < sigma.n_outputs(); ++a)
      out.seo_mismatch = std::max(
          out.seo_mismatch, max_abs(seo_tau(x, a) - p_tau * u * seo(x, a) * u.adjoint() * p_tau));
  const Spectrum spec = spectral_decompose(rho_tau);
  const double smallest = spec.values(support_rank(rho_tau) - 1);
  const double seo_tol = tol_order / smallest;

  if (residual > tol_order) {
    out.outcome = WitnessCheck::Outcome::ResidualFailure;
    std::ostringstream os;
    os << "residual " << residual << " exceeds " << tol_order;
    out.reason = os.str();
  } else if (out.seo_mismatch > seo_tol) {
    out.outcome = WitnessCheck::Outcome::ResidualFailure;
    std::ostringstream os;
    os << "SEO of tau differs from the compressed rotated SEO by " << out.seo_mismatch;
    out.reason = os.str();
  } else {
    out.outcome = WitnessCheck::Outcome::Accepted;
  }
  return out;
}

std::string to_string(OrderVerdict::Status status) {
  switch (status) {
    case OrderVerdict::Status::Holds: return "holds";
    case OrderVerdict::Status::RefutedByRank: return "refuted_by_rank";
    case OrderVerdict::Status::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Equivalence::Status status) {
  switch (status) {
    case Equivalence::Status::Equivalent: return "equivalent";
    case Equivalence::Status::NotEquivalent: return "not_equivalent";
    case Equivalence::Status::Unknown: return "unknown";
  }
  return "unknown";
}

OrderVerdict search_order_witness(const StateAssemblage& sigma, const StateAssemblage& tau,
                                  const OrderConfig& config) {
  require_same_shape(sigma, tau);
  OrderVerdict verdict;
  verdict.rank_sigma = support_rank(reduced_state(sigma));
  verdict.rank_tau = support_rank(reduced_state(tau));
  if (verdict.rank_tau > verdict.rank_sigma) {
    verdict.status = OrderVerdict::Status::RefutedByRank;
    return verdict;
  }

  const Landscape land(sigma, tau);
  const Eigen::Index d = sigma.dim();
  // Squared objective small enough to hand over to the Gauss-Newton polish.
  const double handover = 1e-8;
  for (int r = 0; r < config.n_restarts; ++r) {
    Matrix u = identity(d);
    if (r > 0) {
      auto rng = random::derive(config.seed, static_cast<std::uint64_t>(r));
      u = random::haar_unitary(rng, d);
    }
    u = descend(land, u, config.max_iters, handover);
    u = polish(land, u, 60);
    ++verdict.restarts_run;

    const WitnessCheck check = verify_order_witness(sigma, tau, u, config.tol_order);
    verdict.best_residual = std::min(verdict.best_residual, check.witness.residual);
    if (!check.accepted()) continue;
    ++verdict.verified_restarts;
    if (!verdict.witness) verdict.witness = check.witness;
    if (!verdict.best || check.witness.lambda_opt < verdict.best->lambda_opt) verdict.best = check.witness;
  }
  verdict.status = verdict.witness ? OrderVerdict::Status::Holds : OrderVerdict::Status::Unknown;
  return verdict;
}

Equivalence seo_equivalent(const StateAssemblage& sigma, const StateAssemblage& tau, const OrderConfig& config) {
  Equivalence eq;
  eq.forward = search_order_witness(sigma, tau, config);
  eq.backward = search_order_witness(tau, sigma, config);
  if (eq.forward.rank_sigma != eq.forward.rank_tau) {
    eq.status = Equivalence::Status::NotEquivalent;
    std::ostringstream os;
    os << "support ranks differ (" << eq.forward.rank_sigma << " vs " << eq.forward.rank_tau
       << "); forward " << to_string(eq.forward.status) << ", backward " << to_string(eq.backward.status);
    eq.reason = os.str();
    return eq;
  }
  if (eq.forward.status == OrderVerdict::Status::Holds && eq.backward.status == OrderVerdict::Status::Holds) {
    eq.status = Equivalence::Status::Equivalent;
    eq.witness = eq.forward.witness;
    return eq;
  }
  eq.status = Equivalence::Status::Unknown;
  eq.reason = "witness search did not succeed in both directions";
  return eq;
}

}  // namespace distil
