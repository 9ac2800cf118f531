#include "distil/sdp.hpp"

#include "distil/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace distil::sdp {

namespace {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

constexpr double kRayTol = 1e-8;
constexpr double kRankTol = 1e-10;

// Real symmetric embedding [[Re C, -Im C], [Im C, Re C]].
RMat realify(const Matrix& c) {
  const Eigen::Index n = c.rows();
  RMat r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = c.real();
  r.topRightCorner(n, n) = -c.imag();
  r.bottomLeftCorner(n, n) = c.imag();
  r.bottomRightCorner(n, n) = c.real();
  return r;
}

// Inverse of realify on the structured subspace; averages out the rest.
Matrix complexify(const RMat& y) {
  const Eigen::Index n = y.rows() / 2;
  Matrix x(n, n);
  x.real() = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  x.imag() = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  return hermitian_part(x);
}

RMat sym(const RMat& m) { return 0.5 * (m + m.transpose()); }

struct Entry {
  int block;
  RMat a;
};

// The real-embedded problem. Every user block maps to one internal PSD block,
// free blocks to a +/- pair.
struct RealProblem {
  std::vector<Eigen::Index> size;
  std::vector<RMat> c;
  std::vector<std::vector<Entry>> rows;
  RVec b;
  std::vector<int> plus;
  std::vector<int> minus;
};

RealProblem build_real(const Problem& p) {
  RealProblem rp;
  for (const BlockSpec& spec : p.blocks()) {
    rp.plus.push_back(static_cast<int>(rp.size.size()));
    rp.size.push_back(2 * spec.dim);
    if (spec.psd) {
      rp.minus.push_back(-1);
    } else {
      rp.minus.push_back(static_cast<int>(rp.size.size()));
      rp.size.push_back(2 * spec.dim);
    }
  }
  rp.c.resize(rp.size.size());
  for (std::size_t k = 0; k < rp.size.size(); ++k) rp.c[k] = RMat::Zero(rp.size[k], rp.size[k]);
  for (std::size_t ub = 0; ub < p.blocks().size(); ++ub) {
    const RMat half = 0.5 * realify(p.objective()[ub]);
    rp.c[rp.plus[ub]] += half;
    if (rp.minus[ub] >= 0) rp.c[rp.minus[ub]] -= half;
  }
  const auto& cons = p.constraints();
  rp.b.resize(static_cast<Eigen::Index>(cons.size()));
  rp.rows.resize(cons.size());
  for (std::size_t i = 0; i < cons.size(); ++i) {
    rp.b(static_cast<Eigen::Index>(i)) = cons[i].rhs;
    std::vector<RMat> acc(p.blocks().size());
    for (const Term& t : cons[i].terms) {
      if (acc[t.block].size() == 0) acc[t.block] = RMat::Zero(rp.size[rp.plus[t.block]], rp.size[rp.plus[t.block]]);
      acc[t.block] += 0.5 * realify(t.coefficient);
    }
    for (std::size_t ub = 0; ub < acc.size(); ++ub) {
      if (acc[ub].size() == 0) continue;
      rp.rows[i].push_back(Entry{rp.plus[ub], acc[ub]});
      if (rp.minus[ub] >= 0) rp.rows[i].push_back(Entry{rp.minus[ub], -acc[ub]});
    }
  }
  return rp;
}

double inner(const RMat& a, const RMat& b) { return (a.array() * b.array()).sum(); }

RVec apply_a(const RealProblem& rp, const std::vector<int>& active, const std::vector<RMat>& x) {
  RVec out(static_cast<Eigen::Index>(active.size()));
  for (std::size_t r = 0; r < active.size(); ++r) {
    double s = 0.0;
    for (const Entry& e : rp.rows[active[r]]) s += inner(e.a, x[e.block]);
    out(static_cast<Eigen::Index>(r)) = s;
  }
  return out;
}

std::vector<RMat> apply_at(const RealProblem& rp, const std::vector<int>& active, const RVec& y) {
  std::vector<RMat> out(rp.size.size());
  for (std::size_t k = 0; k < rp.size.size(); ++k) out[k] = RMat::Zero(rp.size[k], rp.size[k]);
  for (std::size_t r = 0; r < active.size(); ++r)
    for (const Entry& e : rp.rows[active[r]]) out[e.block] += y(static_cast<Eigen::Index>(r)) * e.a;
  return out;
}

double block_norm(const std::vector<RMat>& m) {
  double s = 0.0;
  for (const RMat& b : m) s += b.squaredNorm();
  return std::sqrt(s);
}

double block_inner(const std::vector<RMat>& a, const std::vector<RMat>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += inner(a[k], b[k]);
  return s;
}

// Outcome of removing linearly dependent equality rows.
struct RowReduction {
  std::vector<int> active;
  bool inconsistent = false;
  RVec ray;  // full-length Farkas ray when inconsistent
};

RowReduction reduce_rows(const RealProblem& rp) {
  const Eigen::Index m = rp.b.size();
  RowReduction red;
  if (m == 0) return red;

  std::vector<Eigen::Index> offset(rp.size.size() + 1, 0);
  for (std::size_t k = 0; k < rp.size.size(); ++k)
    offset[k + 1] = offset[k] + rp.size[k] * (rp.size[k] + 1) / 2;
  // Columns are svec(A_i), so column inner products equal trace inner products.
  RMat at = RMat::Zero(offset.back(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (const Entry& e : rp.rows[i]) {
      Eigen::Index pos = offset[e.block];
      for (Eigen::Index c = 0; c < e.a.cols(); ++c)
        for (Eigen::Index r = 0; r <= c; ++r)
          at(pos++, i) += (r == c ? 1.0 : std::sqrt(2.0)) * e.a(r, c);
    }
  }
  Eigen::ColPivHouseholderQR<RMat> qr(at);
  qr.setThreshold(kRankTol);
  const Eigen::Index rank = qr.rank();
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index j = 0; j < rank; ++j) red.active.push_back(perm(j));
  if (rank == m) {
    std::sort(red.active.begin(), red.active.end());
    return red;
  }

  const RMat r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  const RMat coeff = r.leftCols(rank).triangularView<Eigen::Upper>().solve(r.rightCols(m - rank));
  RVec b_ind(rank);
  for (Eigen::Index j = 0; j < rank; ++j) b_ind(j) = rp.b(perm(j));
  const double bscale = 1.0 + rp.b.cwiseAbs().maxCoeff();
  for (Eigen::Index d = 0; d < m - rank; ++d) {
    const Eigen::Index row = perm(rank + d);
    const double mismatch = rp.b(row) - coeff.col(d).dot(b_ind);
    const double allowed = 1e-9 * bscale * (1.0 + coeff.col(d).cwiseAbs().sum());
    if (std::abs(mismatch) > allowed) {
      red.inconsistent = true;
      red.ray = RVec::Zero(m);
      red.ray(row) = 1.0 / mismatch;
      for (Eigen::Index j = 0; j < rank; ++j) red.ray(perm(j)) = -coeff(j, d) / mismatch;
      return red;
    }
  }
  std::sort(red.active.begin(), red.active.end());
  return red;
}

struct Scaling {
  RMat g;
  RMat ginv;
  RVec lambda;
  RMat w;
};

Scaling nt_scaling(const RMat& x, const RMat& z) {
  Eigen::SelfAdjointEigenSolver<RMat> ex(x), ez(z);
  const double floor_x = std::max(ex.eigenvalues().maxCoeff(), 1e-300) * 1e-24;
  const double floor_z = std::max(ez.eigenvalues().maxCoeff(), 1e-300) * 1e-24;
  const RVec dx = ex.eigenvalues().cwiseMax(floor_x).cwiseSqrt();
  const RVec dz = ez.eigenvalues().cwiseMax(floor_z).cwiseSqrt();
  const RMat lx = ex.eigenvectors() * dx.asDiagonal();
  const RMat lz = ez.eigenvectors() * dz.asDiagonal();
  Eigen::JacobiSVD<RMat> svd(lz.transpose() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec s = svd.singularValues();
  const RVec s_half = s.cwiseSqrt();
  Scaling sc;
  sc.lambda = s;
  sc.g = lx * svd.matrixV() * s_half.cwiseInverse().asDiagonal();
  sc.ginv = s_half.asDiagonal() * svd.matrixV().transpose() * dx.cwiseInverse().asDiagonal() *
            ex.eigenvectors().transpose();
  sc.w = sym(sc.g * sc.g.transpose());
  return sc;
}

// Largest alpha with Lambda + alpha * D >= 0, given D in the scaled frame.
double max_step(const RVec& lambda, const RMat& d_scaled) {
  const RVec inv_root = lambda.cwiseSqrt().cwiseInverse();
  const RMat m = sym(inv_root.asDiagonal() * d_scaled * inv_root.asDiagonal());
  Eigen::SelfAdjointEigenSolver<RMat> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

struct Direction {
  std::vector<RMat> dx, dz, dx_scaled, dz_scaled;
  RVec dy;
};

class InteriorPoint {
 public:
  InteriorPoint(const RealProblem& rp, const std::vector<int>& active, const Options& opt)
      : rp_(rp), active_(active), opt_(opt), m_(static_cast<Eigen::Index>(active.size())) {
    b_.resize(m_);
    for (Eigen::Index r = 0; r < m_; ++r) b_(r) = rp.b(active[r]);
    by_block_.resize(rp.size.size());
    for (std::size_t r = 0; r < active.size(); ++r)
      for (const Entry& e : rp.rows[active[r]]) by_block_[e.block].push_back({static_cast<int>(r), &e.a});
    n_total_ = 0;
    for (Eigen::Index s : rp.size) n_total_ += static_cast<double>(s);
  }

  struct Result {
    Status status = Status::MaxIterations;
    std::vector<RMat> x, z;
    RVec y;
    int iterations = 0;
    RVec ray;
    double ray_violation = 0.0;
  };

  Result run() {
    init_point();
    Result res;
    const double norm_b = b_.norm();
    double norm_c = 0.0;
    for (const RMat& c : rp_.c) norm_c += c.squaredNorm();
    norm_c = std::sqrt(norm_c);
    int stalls = 0;

    for (int iter = 0; iter <= opt_.max_iters; ++iter) {
      res.iterations = iter;
      const RVec rp_res = b_ - apply_a(rp_, active_, x_);
      std::vector<RMat> rd = apply_at(rp_, active_, y_);
      for (std::size_t k = 0; k < rd.size(); ++k) rd[k] = rp_.c[k] - rd[k] - z_[k];
      const double pobj = block_inner(rp_.c, x_);
      const double dobj = b_.dot(y_);
      const double mu = block_inner(x_, z_) / n_total_;
      const double pinf = rp_res.norm() / (1.0 + norm_b);
      const double dinf = block_norm(rd) / (1.0 + norm_c);
      const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

      if (!std::isfinite(pobj) || !std::isfinite(dobj) || !std::isfinite(mu)) break;
      if (gap <= opt_.gap_tol && pinf <= opt_.feas_tol && dinf <= opt_.feas_tol) {
        res.status = Status::Optimal;
        break;
      }
      if (dobj > 0.0 && certify_infeasible(dobj, res)) {
        res.status = Status::Infeasible;
        break;
      }
      if (pobj < 0.0 && certify_unbounded(pobj)) {
        res.status = Status::Unbounded;
        break;
      }
      if (iter == opt_.max_iters) break;

      std::vector<Scaling> sc(x_.size());
      for (std::size_t k = 0; k < x_.size(); ++k) sc[k] = nt_scaling(x_[k], z_[k]);
      if (!factor_schur(sc)) break;

      // Predictor.
      std::vector<RMat> xi(x_.size());
      for (std::size_t k = 0; k < x_.size(); ++k) xi[k] = -RMat(sc[k].lambda.asDiagonal());
      const Direction aff = direction(sc, xi, rp_res, rd);
      double ap = 1.0, ad = 1.0;
      for (std::size_t k = 0; k < x_.size(); ++k) {
        ap = std::min(ap, max_step(sc[k].lambda, aff.dx_scaled[k]));
        ad = std::min(ad, max_step(sc[k].lambda, aff.dz_scaled[k]));
      }
      double mu_aff = 0.0;
      for (std::size_t k = 0; k < x_.size(); ++k)
        mu_aff += inner(x_[k] + ap * aff.dx[k], z_[k] + ad * aff.dz[k]);
      mu_aff /= n_total_;
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

      // Corrector.
      for (std::size_t k = 0; k < x_.size(); ++k) {
        const RVec& l = sc[k].lambda;
        const RMat second = aff.dx_scaled[k] * aff.dz_scaled[k];
        RMat rc = -(second + second.transpose());
        rc.diagonal().array() += 2.0 * sigma * mu - 2.0 * l.array().square();
        for (Eigen::Index i = 0; i < rc.rows(); ++i)
          for (Eigen::Index j = 0; j < rc.cols(); ++j) rc(i, j) /= (l(i) + l(j));
        xi[k] = rc;
      }
      const Direction dir = direction(sc, xi, rp_res, rd);
      double ap_max = std::numeric_limits<double>::infinity();
      double ad_max = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < x_.size(); ++k) {
        ap_max = std::min(ap_max, max_step(sc[k].lambda, dir.dx_scaled[k]));
        ad_max = std::min(ad_max, max_step(sc[k].lambda, dir.dz_scaled[k]));
      }
      const double gamma = 0.9 + 0.09 * std::min(ap, ad);
      const double step_p = std::min(1.0, gamma * ap_max);
      const double step_d = std::min(1.0, gamma * ad_max);
      for (std::size_t k = 0; k < x_.size(); ++k) {
        x_[k] = sym(x_[k] + step_p * dir.dx[k]);
        z_[k] = sym(z_[k] + step_d * dir.dz[k]);
      }
      y_ += step_d * dir.dy;

      stalls = (std::max(step_p, step_d) < 1e-8) ? stalls + 1 : 0;
      if (stalls >= 3) break;
    }
    res.x = x_;
    res.z = z_;
    res.y = y_;
    return res;
  }

 private:
  void init_point() {
    x_.resize(rp_.size.size());
    z_.resize(rp_.size.size());
    for (std::size_t k = 0; k < rp_.size.size(); ++k) {
      const double n = static_cast<double>(rp_.size[k]);
      double ratio = 0.0, max_a = 0.0;
      for (const auto& [r, a] : by_block_[k]) {
        const double na = a->norm();
        ratio = std::max(ratio, (1.0 + std::abs(b_(r))) / (1.0 + na));
        max_a = std::max(max_a, na);
      }
      const double xi = std::max({10.0, std::sqrt(n), n * ratio});
      const double eta = std::max({10.0, std::sqrt(n), max_a, rp_.c[k].norm()});
      x_[k] = xi * RMat::Identity(rp_.size[k], rp_.size[k]);
      z_[k] = eta * RMat::Identity(rp_.size[k], rp_.size[k]);
    }
    y_ = RVec::Zero(m_);
  }

  bool factor_schur(const std::vector<Scaling>& sc) {
    RMat schur = RMat::Zero(m_, m_);
    for (std::size_t k = 0; k < by_block_.size(); ++k) {
      const RMat& w = sc[k].w;
      for (const auto& [i, ai] : by_block_[k]) {
        const RMat p = w * (*ai) * w;
        for (const auto& [j, aj] : by_block_[k]) {
          if (j < i) continue;
          const double v = inner(*aj, p);
          schur(i, j) += v;
          if (j != i) schur(j, i) += v;
        }
      }
    }
    llt_.compute(schur);
    use_ldlt_ = false;
    if (llt_.info() == Eigen::Success) return true;
    // Near convergence rounding can make the Schur matrix slightly indefinite.
    const double scale = std::max(schur.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    for (double eps : {1e-14, 1e-12, 1e-10}) {
      RMat shifted = schur;
      shifted.diagonal().array() += eps * scale;
      llt_.compute(shifted);
      if (llt_.info() == Eigen::Success) return true;
    }
    ldlt_.compute(schur);
    use_ldlt_ = true;
    return ldlt_.info() == Eigen::Success;
  }

  RVec solve_schur(const RVec& h) const { return use_ldlt_ ? RVec(ldlt_.solve(h)) : RVec(llt_.solve(h)); }

  Direction direction(const std::vector<Scaling>& sc, const std::vector<RMat>& xi, const RVec& rp_res,
                      const std::vector<RMat>& rd) const {
    const std::size_t nb = x_.size();
    std::vector<RMat> gxg(nb), wrw(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      gxg[k] = sym(sc[k].g * xi[k] * sc[k].g.transpose());
      wrw[k] = sym(sc[k].w * rd[k] * sc[k].w);
    }
    const RVec h = rp_res - apply_a(rp_, active_, gxg) + apply_a(rp_, active_, wrw);
    Direction d;
    d.dy = solve_schur(h);
    const std::vector<RMat> aty = apply_at(rp_, active_, d.dy);
    d.dx.resize(nb);
    d.dz.resize(nb);
    d.dx_scaled.resize(nb);
    d.dz_scaled.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      d.dz[k] = sym(rd[k] - aty[k]);
      d.dx[k] = sym(gxg[k] - sc[k].w * d.dz[k] * sc[k].w);
      d.dx_scaled[k] = sym(sc[k].ginv * d.dx[k] * sc[k].ginv.transpose());
      d.dz_scaled[k] = sym(sc[k].g.transpose() * d.dz[k] * sc[k].g);
    }
    return d;
  }

  bool certify_infeasible(double dobj, Result& res) const {
    const RVec ray = y_ / dobj;
    const std::vector<RMat> aty = apply_at(rp_, active_, ray);
    double violation = 0.0;
    for (const RMat& m : aty) {
      Eigen::SelfAdjointEigenSolver<RMat> es(-m, Eigen::EigenvaluesOnly);
      violation = std::max(violation, -es.eigenvalues()(0));
    }
    if (violation > kRayTol) return false;
    res.ray = ray;
    res.ray_violation = violation;
    return true;
  }

  bool certify_unbounded(double pobj) const {
    std::vector<RMat> scaled(x_.size());
    for (std::size_t k = 0; k < x_.size(); ++k) scaled[k] = x_[k] / (-pobj);
    return apply_a(rp_, active_, scaled).norm() <= kRayTol;
  }

  const RealProblem& rp_;
  const std::vector<int>& active_;
  Options opt_;
  Eigen::Index m_;
  RVec b_;
  std::vector<std::vector<std::pair<int, const RMat*>>> by_block_;
  double n_total_ = 0.0;
  std::vector<RMat> x_, z_;
  RVec y_;
  Eigen::LLT<RMat> llt_;
  Eigen::LDLT<RMat> ldlt_;
  bool use_ldlt_ = false;
};

Matrix block_adjoint_sum(const Problem& p, const Eigen::VectorXd& y, std::size_t block) {
  const Eigen::Index d = p.blocks()[block].dim;
  Matrix out = Matrix::Zero(d, d);
  const auto& cons = p.constraints();
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0.0) continue;
    for (const Term& t : cons[i].terms)
      if (t.block == block) out += yi * t.coefficient;
  }
  return hermitian_part(out);
}

}  // namespace

MapTerm scaled(std::size_t block, double factor) {
  return MapTerm{block, [factor](const Matrix& c) -> Matrix { return factor * c; }};
}

std::size_t Problem::add_block(std::string name, Eigen::Index dim, bool psd) {
  if (dim <= 0) throw IllFormedProblem("block '" + name + "' must have positive dimension");
  blocks_.push_back(BlockSpec{std::move(name), dim, psd});
  objective_.push_back(Matrix::Zero(dim, dim));
  return blocks_.size() - 1;
}

void Problem::add_objective(std::size_t block, const Matrix& coefficient) {
  if (block >= blocks_.size()) throw IllFormedProblem("objective refers to an unknown block");
  if (coefficient.rows() != blocks_[block].dim || coefficient.cols() != blocks_[block].dim)
    throw IllFormedProblem("objective coefficient has the wrong shape for block '" + blocks_[block].name + "'");
  objective_[block] += coefficient;
}

std::size_t Problem::add_equality(LinearConstraint constraint) {
  constraints_.push_back(std::move(constraint));
  return constraints_.size() - 1;
}

std::vector<Matrix> hermitian_entry_basis(Eigen::Index dim) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(dim * dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    Matrix e = Matrix::Zero(dim, dim);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      Matrix re = Matrix::Zero(dim, dim);
      re(i, j) = re(j, i) = 0.5;
      basis.push_back(re);
      Matrix im = Matrix::Zero(dim, dim);
      im(i, j) = Complex(0.0, 0.5);
      im(j, i) = Complex(0.0, -0.5);
      basis.push_back(im);
    }
  }
  return basis;
}

Matrix hermitian_multiplier(const Eigen::VectorXd& y, std::size_t first, Eigen::Index dim) {
  const std::vector<Matrix> basis = hermitian_entry_basis(dim);
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < basis.size(); ++k)
    out += y(static_cast<Eigen::Index>(first + k)) * basis[k];
  return out;
}

std::size_t Problem::add_hermitian_equality(const std::vector<MapTerm>& terms, const Matrix& rhs) {
  const Eigen::Index dim = rhs.rows();
  if (rhs.cols() != dim) throw IllFormedProblem("Hermitian equality needs a square right-hand side");
  const std::size_t first = constraints_.size();
  for (const Matrix& c : hermitian_entry_basis(dim)) {
    LinearConstraint con;
    con.rhs = (c * rhs).trace().real();
    for (const MapTerm& t : terms) {
      if (t.block >= blocks_.size()) throw IllFormedProblem("Hermitian equality refers to an unknown block");
      con.terms.push_back(Term{t.block, t.adjoint(c)});
    }
    constraints_.push_back(std::move(con));
  }
  return first;
}

void Problem::validate() const {
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (!is_hermitian(objective_[b], 1e-12))
      throw IllFormedProblem("objective coefficient of block '" + blocks_[b].name + "' is not Hermitian");
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (!std::isfinite(constraints_[i].rhs))
      throw IllFormedProblem("constraint " + std::to_string(i) + " has a non-finite right-hand side");
    for (const Term& t : constraints_[i].terms) {
      if (t.block >= blocks_.size())
        throw IllFormedProblem("constraint " + std::to_string(i) + " refers to an unknown block");
      const Eigen::Index d = blocks_[t.block].dim;
      if (t.coefficient.rows() != d || t.coefficient.cols() != d)
        throw IllFormedProblem("constraint " + std::to_string(i) + " has a mis-shaped coefficient");
      if (!is_hermitian(t.coefficient, 1e-12))
        throw IllFormedProblem("constraint " + std::to_string(i) + " has a non-Hermitian coefficient");
    }
  }
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

double primal_residual(const Problem& problem, const std::vector<Matrix>& blocks) {
  const auto& cons = problem.constraints();
  double sq = 0.0, bsq = 0.0;
  for (const LinearConstraint& c : cons) {
    double v = -c.rhs;
    for (const Term& t : c.terms) v += (t.coefficient * blocks[t.block]).trace().real();
    sq += v * v;
    bsq += c.rhs * c.rhs;
  }
  return std::sqrt(sq) / (1.0 + std::sqrt(bsq));
}

double objective_value(const Problem& problem, const std::vector<Matrix>& blocks) {
  double v = problem.objective_offset();
  for (std::size_t b = 0; b < blocks.size(); ++b) v += (problem.objective()[b] * blocks[b]).trace().real();
  return v;
}

double farkas_cone_violation(const Problem& problem, const Eigen::VectorXd& y) {
  double worst = 0.0;
  for (std::size_t b = 0; b < problem.blocks().size(); ++b) {
    const Matrix neg = -block_adjoint_sum(problem, y, b);
    if (problem.blocks()[b].psd)
      worst = std::max(worst, -min_eigenvalue(neg));
    else
      worst = std::max(worst, neg.norm());
  }
  return worst;
}

Solution solve(const Problem& problem, const Options& options) {
  problem.validate();
  if (!options.dump_path.empty()) {
    std::ofstream dump(options.dump_path);
    if (!dump) throw IllFormedProblem("cannot open dump file " + options.dump_path);
    write_sdpa_sparse(problem, dump);
  }
  const RealProblem rp = build_real(problem);
  const std::size_t nb = problem.blocks().size();
  const Eigen::Index m = rp.b.size();

  Solution sol;
  sol.dual_multipliers = Eigen::VectorXd::Zero(m);
  sol.primal_blocks.resize(nb);
  sol.dual_slacks.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const Eigen::Index d = problem.blocks()[b].dim;
    sol.primal_blocks[b] = Matrix::Zero(d, d);
    sol.dual_slacks[b] = Matrix::Zero(d, d);
  }

  const RowReduction red = reduce_rows(rp);
  if (red.inconsistent) {
    sol.status = Status::Infeasible;
    sol.farkas_ray = red.ray;
    sol.ray_objective = rp.b.dot(red.ray);
    sol.ray_cone_violation = farkas_cone_violation(problem, red.ray);
    return sol;
  }

  InteriorPoint ipm(rp, red.active, options);
  const InteriorPoint::Result res = ipm.run();
  sol.iterations = res.iterations;

  for (std::size_t r = 0; r < red.active.size(); ++r)
    sol.dual_multipliers(red.active[r]) = res.y(static_cast<Eigen::Index>(r));

  if (res.status == Status::Infeasible) {
    sol.status = Status::Infeasible;
    sol.farkas_ray = Eigen::VectorXd::Zero(m);
    for (std::size_t r = 0; r < red.active.size(); ++r)
      sol.farkas_ray(red.active[r]) = res.ray(static_cast<Eigen::Index>(r));
    sol.ray_objective = rp.b.dot(sol.farkas_ray);
    sol.ray_cone_violation = farkas_cone_violation(problem, sol.farkas_ray);
    return sol;
  }

  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < nb; ++b) {
    Matrix x = complexify(res.x[rp.plus[b]]);
    Matrix z = 2.0 * complexify(res.z[rp.plus[b]]);
    if (rp.minus[b] >= 0) {
      x -= complexify(res.x[rp.minus[b]]);
    } else {
      min_eig = std::min(min_eig, min_eigenvalue(x));
    }
    sol.primal_blocks[b] = x;
    sol.dual_slacks[b] = z;
  }
  sol.min_block_eigenvalue = std::isfinite(min_eig) ? min_eig : 0.0;

  sol.primal_objective = objective_value(problem, sol.primal_blocks);
  sol.dual_objective = problem.objective_offset() + rp.b.dot(sol.dual_multipliers);
  sol.gap = std::abs(sol.primal_objective - sol.dual_objective) /
            (1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective));
  sol.primal_residual = primal_residual(problem, sol.primal_blocks);
  double dsq = 0.0, csq = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const Matrix r = problem.objective()[b] - block_adjoint_sum(problem, sol.dual_multipliers, b) -
                     sol.dual_slacks[b];
    dsq += r.squaredNorm();
    csq += problem.objective()[b].squaredNorm();
  }
  sol.dual_residual = std::sqrt(dsq) / (1.0 + std::sqrt(csq));

  sol.status = res.status;
  if (sol.status == Status::Optimal &&
      (sol.primal_residual > options.feas_tol || sol.min_block_eigenvalue < -options.feas_tol))
    sol.status = Status::MaxIterations;
  return sol;
}

void write_sdpa_sparse(const Problem& problem, std::ostream& out) {
  problem.validate();
  const RealProblem rp = build_real(problem);
  out << "* distil SDP dump: real embedding, SDPA sparse format\n";
  out << "* primal here: minimize <C,X> + offset s.t. <A_i,X> = b_i, X psd\n";
  out << "* written as SDPA dual: F0 = -C, Fi = A_i, c_i = b_i\n";
  out << "* objective offset " << std::setprecision(17) << problem.objective_offset() << "\n";
  out << rp.b.size() << "\n" << rp.size.size() << "\n";
  for (std::size_t k = 0; k < rp.size.size(); ++k) out << (k ? " " : "") << rp.size[k];
  out << "\n";
  for (Eigen::Index i = 0; i < rp.b.size(); ++i) out << (i ? " " : "") << rp.b(i);
  out << "\n";
  auto emit = [&out](std::size_t mat, int blk, const RMat& a, double sign) {
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      for (Eigen::Index r = 0; r <= c; ++r)
        if (a(r, c) != 0.0)
          out << mat << " " << blk + 1 << " " << r + 1 << " " << c + 1 << " " << sign * a(r, c) << "\n";
  };
  for (std::size_t k = 0; k < rp.c.size(); ++k) emit(0, static_cast<int>(k), rp.c[k], -1.0);
  for (std::size_t i = 0; i < rp.rows.size(); ++i)
    for (const Entry& e : rp.rows[i]) emit(i + 1, e.block, e.a, 1.0);
}

}  // namespace distil::sdp
