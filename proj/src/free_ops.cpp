#include "distil/free_ops.hpp"

#include "distil/errors.hpp"

#include <cmath>
#include <sstream>

namespace distil {

namespace {

void check_distribution(const Distribution& p, std::size_t expected, const std::string& where) {
  if (p.size() != expected) {
    std::ostringstream os;
    os << where << " has " << p.size() << " entries, expected " << expected;
    throw MalformedDistribution(os.str());
  }
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -kDistributionTol) {
      std::ostringstream os;
      os << where << " has invalid entry " << v;
      throw MalformedDistribution(os.str());
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kDistributionTol) {
    std::ostringstream os;
    os << where << " sums to " << sum;
    throw MalformedDistribution(os.str());
  }
}

// Checks the classical tables against the original input/outcome counts.
void check_tables(const FreeOpSpec& op, std::size_t n_in, std::size_t n_out) {
  const std::size_t nw = op.n_branches();
  if (nw == 0) throw MalformedDistribution("free operation has no branches");
  if (op.relabel.size() != nw) throw MalformedDistribution("relabel table does not cover every branch");
  const std::size_t n_new_in = op.input_choice.front().size();
  if (n_new_in == 0) throw MalformedDistribution("free operation has no new inputs");
  const std::size_t n_new_out = op.n_new_outputs();
  if (n_new_out == 0) throw MalformedDistribution("free operation has no new outcomes");
  for (std::size_t w = 0; w < nw; ++w) {
    if (op.input_choice[w].size() != n_new_in || op.relabel[w].size() != n_new_in)
      throw MalformedDistribution("branch " + std::to_string(w) + " has a different number of new inputs");
    for (std::size_t xp = 0; xp < n_new_in; ++xp) {
      const std::string at = "[" + std::to_string(w) + "][" + std::to_string(xp) + "]";
      check_distribution(op.input_choice[w][xp], n_in, "input choice " + at);
      if (op.relabel[w][xp].size() != n_in) throw MalformedDistribution("relabel " + at + " misses inputs");
      for (std::size_t x = 0; x < n_in; ++x) {
        if (op.relabel[w][xp][x].size() != n_out)
          throw MalformedDistribution("relabel " + at + "[" + std::to_string(x) + "] misses outcomes");
        for (std::size_t a = 0; a < n_out; ++a)
          check_distribution(op.relabel[w][xp][x][a], n_new_out,
                             "relabel " + at + "[" + std::to_string(x) + "][" + std::to_string(a) + "]");
      }
    }
  }
}

// sum_{x,a} p(x|x',w) p(a'|a,x,x',w) mapped(x, a), for every (x', a').
template <class Map>
Elements post_process(const FreeOpSpec& op, std::size_t w, Eigen::Index dim, std::size_t n_in, std::size_t n_out,
                      Map mapped) {
  const std::size_t n_new_in = op.n_new_inputs();
  const std::size_t n_new_out = op.n_new_outputs();
  Elements out(n_new_in, std::vector<Matrix>(n_new_out, Matrix::Zero(dim, dim)));
  for (std::size_t xp = 0; xp < n_new_in; ++xp)
    for (std::size_t x = 0; x < n_in; ++x) {
      const double px = op.input_choice[w][xp][x];
      if (px == 0.0) continue;
      for (std::size_t a = 0; a < n_out; ++a) {
        const Matrix& m = mapped(x, a);
        for (std::size_t ap = 0; ap < n_new_out; ++ap) {
          const double weight = px * op.relabel[w][xp][x][a][ap];
          if (weight != 0.0) out[xp][ap] += weight * m;
        }
      }
    }
  return out;
}

void accumulate(Elements& total, const Elements& part) {
  for (std::size_t x = 0; x < total.size(); ++x)
    for (std::size_t a = 0; a < total[x].size(); ++a) total[x][a] += part[x][a];
}

}  // namespace

std::size_t FreeOpSpec::n_new_inputs() const { return input_choice.empty() ? 0 : input_choice.front().size(); }

std::size_t FreeOpSpec::n_new_outputs() const {
  if (relabel.empty() || relabel.front().empty() || relabel.front().front().empty() ||
      relabel.front().front().front().empty())
    return 0;
  return relabel.front().front().front().front().size();
}

MeasurementAssemblage apply_incompatibility_free_op(const MeasurementAssemblage& e, const FreeOpSpec& op) {
  check_tables(op, e.n_inputs(), e.n_outputs());
  check_distribution(op.omega, op.n_branches(), "branch distribution");
  Elements total(op.n_new_inputs(), std::vector<Matrix>(op.n_new_outputs(), Matrix::Zero(e.dim(), e.dim())));
  for (std::size_t w = 0; w < op.n_branches(); ++w) {
    if (op.omega[w] == 0.0) continue;
    const double pw = op.omega[w];
    accumulate(total, post_process(op, w, e.dim(), e.n_inputs(), e.n_outputs(),
                                   [&](std::size_t x, std::size_t a) -> Matrix { return pw * e(x, a); }));
  }
  for (auto& row : total)
    for (auto& m : row) m = hermitian_part(m);
  return MeasurementAssemblage(std::move(total), e.carrier());
}

StateAssemblage apply_steering_free_op(const StateAssemblage& sigma, const FreeOpSpec& op) {
  check_tables(op, sigma.n_inputs(), sigma.n_outputs());
  if (op.instrument.size() != op.n_branches())
    throw MalformedInstrument("instrument needs one Kraus collection per branch");
  Eigen::Index dim_out = -1;
  Matrix completeness = Matrix::Zero(sigma.dim(), sigma.dim());
  for (std::size_t w = 0; w < op.instrument.size(); ++w)
    for (const Matrix& k : op.instrument[w]) {
      if (k.cols() != sigma.dim() || (dim_out >= 0 && k.rows() != dim_out) || k.rows() == 0)
        throw MalformedInstrument("Kraus operator of branch " + std::to_string(w) + " has the wrong shape");
      dim_out = k.rows();
      completeness += k.adjoint() * k;
    }
  if (dim_out < 0) throw MalformedInstrument("instrument has no Kraus operators");
  const double defect = max_abs(completeness - identity(sigma.dim()));
  if (defect > kInstrumentTol) {
    std::ostringstream os;
    os << "instrument is not trace preserving (defect " << defect << ")";
    throw MalformedInstrument(os.str());
  }

  Elements total(op.n_new_inputs(), std::vector<Matrix>(op.n_new_outputs(), Matrix::Zero(dim_out, dim_out)));
  for (std::size_t w = 0; w < op.n_branches(); ++w) {
    if (op.instrument[w].empty()) continue;
    Elements branch(sigma.n_inputs(), std::vector<Matrix>(sigma.n_outputs(), Matrix::Zero(dim_out, dim_out)));
    for (const Matrix& k : op.instrument[w]) accumulate(branch, conjugate_elements(sigma.elements(), k));
    accumulate(total, post_process(op, w, dim_out, sigma.n_inputs(), sigma.n_outputs(),
                                   [&](std::size_t x, std::size_t a) -> const Matrix& { return branch[x][a]; }));
  }
  for (auto& row : total)
    for (auto& m : row) m = hermitian_part(m);
  return StateAssemblage(std::move(total));
}

FreeOpSpec identity_free_op(std::size_t n_inputs, std::size_t n_outputs, Eigen::Index dim) {
  FreeOpSpec op;
  op.omega = {1.0};
  op.input_choice.assign(1, std::vector<Distribution>(n_inputs, Distribution(n_inputs, 0.0)));
  op.relabel.assign(1, std::vector<std::vector<std::vector<Distribution>>>(
                           n_inputs, std::vector<std::vector<Distribution>>(
                                         n_inputs, std::vector<Distribution>(n_outputs, Distribution(n_outputs, 0.0)))));
  for (std::size_t xp = 0; xp < n_inputs; ++xp) {
    op.input_choice[0][xp][xp] = 1.0;
    for (std::size_t x = 0; x < n_inputs; ++x)
      for (std::size_t a = 0; a < n_outputs; ++a) op.relabel[0][xp][x][a][a] = 1.0;
  }
  if (dim > 0) op.instrument = {{identity(dim)}};
  return op;
}

FreeOpSpec random_free_op(random::Engine& rng, const RandomFreeOpShape& shape) {
  const std::size_t nw = shape.n_branches;
  FreeOpSpec op;
  op.omega = random::random_distribution(rng, nw);
  op.input_choice.assign(nw, std::vector<Distribution>(shape.n_new_inputs));
  op.relabel.assign(nw, std::vector<std::vector<std::vector<Distribution>>>(
                            shape.n_new_inputs, std::vector<std::vector<Distribution>>(
                                                    shape.n_inputs, std::vector<Distribution>(shape.n_outputs))));
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t xp = 0; xp < shape.n_new_inputs; ++xp) {
      op.input_choice[w][xp] = random::random_distribution(rng, shape.n_inputs);
      for (std::size_t x = 0; x < shape.n_inputs; ++x)
        for (std::size_t a = 0; a < shape.n_outputs; ++a)
          op.relabel[w][xp][x][a] = random::random_distribution(rng, shape.n_new_outputs);
    }
  if (shape.dim > 0) {
    const Eigen::Index d = shape.dim;
    const Eigen::Index d_out = shape.dim_out > 0 ? shape.dim_out : d;
    const Eigen::Index n_kraus = static_cast<Eigen::Index>(nw * shape.kraus_per_branch);
    // Stacked Kraus operators form an isometry G (G^dagger G)^{-1/2}.
    const Matrix g = random::ginibre(rng, n_kraus * d_out, d);
    const Matrix iso = g * sqrt_pinv(hermitian_part(g.adjoint() * g));
    op.instrument.assign(nw, {});
    for (std::size_t w = 0; w < nw; ++w)
      for (std::size_t k = 0; k < shape.kraus_per_branch; ++k) {
        const Eigen::Index row = static_cast<Eigen::Index>(w * shape.kraus_per_branch + k) * d_out;
        op.instrument[w].push_back(iso.middleRows(row, d_out));
      }
  }
  return op;
}

}  // namespace distil
