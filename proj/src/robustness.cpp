#include "distil/robustness.hpp"

#include "distil/errors.hpp"
#include "distil/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace distil {

namespace {

constexpr double kZeroRobustness = 1e-9;

enum class InputKind { State, Measurement };

enum class Normalization { None, Consistent, Carrier };

Elements compress(const Elements& e, const Matrix& v) {
  Elements out(e.size());
  for (std::size_t x = 0; x < e.size(); ++x)
    for (const Matrix& m : e[x]) out[x].push_back(hermitian_part(v.adjoint() * m * v));
  return out;
}

Matrix lift(const Matrix& m, const Matrix& v) { return hermitian_part(v * m * v.adjoint()); }

// Indices of the PSD blocks of a decomposition program.
struct Layout {
  std::vector<std::size_t> strategy;
  std::vector<std::vector<std::size_t>> slack;  // [x][a], empty for membership programs
  std::vector<std::vector<std::size_t>> first_row;  // [x][a] first row of the reconstruction equality
  std::size_t balance_row = 0;
  bool has_balance = false;
};

// Adds strategy blocks and the reconstruction equalities
// sum_l D(a|x,l) X_l - S_{a|x} = target_{a|x} (S omitted when with_slack is false).
Layout add_decomposition(sdp::Problem& p, const Elements& target, Eigen::Index r, bool with_slack) {
  const std::size_t n_in = target.size();
  const std::size_t n_out = target.front().size();
  const DeterministicStrategySet strategies = enumerate_deterministic_strategies(n_in, n_out);
  Layout layout;
  for (std::size_t l = 0; l < strategies.size(); ++l)
    layout.strategy.push_back(p.add_block("strategy " + std::to_string(l), r));
  layout.first_row.assign(n_in, std::vector<std::size_t>(n_out, 0));
  if (with_slack) {
    layout.slack.assign(n_in, std::vector<std::size_t>(n_out, 0));
    for (std::size_t x = 0; x < n_in; ++x)
      for (std::size_t a = 0; a < n_out; ++a)
        layout.slack[x][a] = p.add_block("slack " + std::to_string(x) + "," + std::to_string(a), r);
  }
  for (std::size_t x = 0; x < n_in; ++x)
    for (std::size_t a = 0; a < n_out; ++a) {
      std::vector<sdp::MapTerm> terms;
      for (std::size_t l = 0; l < strategies.size(); ++l)
        if (strategies.responds(l, x, a)) terms.push_back(sdp::scaled(layout.strategy[l], 1.0));
      if (with_slack) terms.push_back(sdp::scaled(layout.slack[x][a], -1.0));
      layout.first_row[x][a] = p.add_hermitian_equality(terms, target[x][a]);
    }
  return layout;
}

void add_custom_constraints(sdp::Problem& p, const Layout& layout, const std::vector<NoiseConstraint>& constraints,
                            Eigen::Index r, InputKind kind) {
  const std::size_t n_in = layout.slack.size();
  const std::size_t n_out = layout.slack.front().size();
  // t = sum_a tr S_{a|0} (divided by the carrier rank for measurements).
  const double t_scale = kind == InputKind::State ? 1.0 : 1.0 / static_cast<double>(r);
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const NoiseConstraint& nc = constraints[c];
    std::vector<std::vector<Matrix>> coeff(n_in, std::vector<Matrix>(n_out, Matrix::Zero(r, r)));
    for (std::size_t x = 0; x < n_in; ++x)
      for (std::size_t a = 0; a < n_out; ++a) coeff[x][a] = nc.coefficients[x][a];
    for (std::size_t a = 0; a < n_out; ++a) coeff[0][a] -= (nc.rhs * t_scale) * identity(r);
    sdp::LinearConstraint lc;
    for (std::size_t x = 0; x < n_in; ++x)
      for (std::size_t a = 0; a < n_out; ++a) lc.terms.push_back(sdp::Term{layout.slack[x][a], coeff[x][a]});
    if (nc.relation != NoiseConstraint::Relation::Equal) {
      const std::size_t s = p.add_block("noise slack " + std::to_string(c), 1);
      const double sign = nc.relation == NoiseConstraint::Relation::LessEqual ? 1.0 : -1.0;
      lc.terms.push_back(sdp::Term{s, Matrix::Constant(1, 1, Complex(sign, 0.0))});
    }
    lc.rhs = 0.0;
    p.add_equality(std::move(lc));
  }
}

void check_custom(const std::vector<NoiseConstraint>& constraints, std::size_t n_in, std::size_t n_out,
                  Eigen::Index dim) {
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const NoiseConstraint& nc = constraints[c];
    std::ostringstream where;
    where << "noise constraint " << c << ": ";
    if (!std::isfinite(nc.rhs)) throw UnrepresentableNoiseModel(where.str() + "right-hand side is not finite");
    if (nc.coefficients.size() != n_in) throw UnrepresentableNoiseModel(where.str() + "wrong number of inputs");
    for (const auto& row : nc.coefficients) {
      if (row.size() != n_out) throw UnrepresentableNoiseModel(where.str() + "wrong number of outcomes");
      for (const Matrix& m : row) {
        if (m.rows() != dim || m.cols() != dim)
          throw UnrepresentableNoiseModel(where.str() + "coefficient has the wrong dimension");
        if (!is_hermitian(m)) throw UnrepresentableNoiseModel(where.str() + "coefficient is not Hermitian");
      }
    }
  }
}

struct RobustnessSpec {
  InputKind kind;
  Normalization normalization = Normalization::None;
  const std::vector<NoiseConstraint>* custom = nullptr;
  sdp::Options options = robustness_solver_options();
};

RobustnessResult solve_robustness(const Elements& input, const Matrix& v, const Matrix& rho_full,
                                  const RobustnessSpec& spec) {
  const Eigen::Index r = v.cols();
  const Elements target = compress(input, v);
  const std::size_t n_in = target.size();
  const std::size_t n_out = target.front().size();

  sdp::Problem p;
  const Layout layout = add_decomposition(p, target, r, true);
  const double weight = spec.kind == InputKind::State ? 1.0 : 1.0 / static_cast<double>(r);
  for (std::size_t b : layout.strategy) p.add_objective(b, weight * identity(r));
  p.set_objective_offset(-1.0);

  std::size_t balance_row = 0;
  if (spec.normalization == Normalization::Carrier) {
    std::vector<sdp::MapTerm> terms;
    for (std::size_t b : layout.strategy)
      terms.push_back(sdp::MapTerm{b, [r](const Matrix& c) -> Matrix {
                                     return c - (c.trace().real() / static_cast<double>(r)) * identity(r);
                                   }});
    balance_row = p.add_hermitian_equality(terms, Matrix::Zero(r, r));
  } else if (spec.normalization == Normalization::Consistent) {
    const Matrix rho = hermitian_part(v.adjoint() * rho_full * v);
    std::vector<sdp::MapTerm> terms;
    for (std::size_t b : layout.strategy)
      terms.push_back(sdp::MapTerm{b, [rho, r](const Matrix& c) -> Matrix {
                                     return c - (rho * c).trace().real() * identity(r);
                                   }});
    balance_row = p.add_hermitian_equality(terms, Matrix::Zero(r, r));
  }
  if (spec.custom) add_custom_constraints(p, layout, *spec.custom, r, spec.kind);

  sdp::Solution sol = sdp::solve(p, spec.options);
  if (sol.status != sdp::Status::Optimal) {
    std::ostringstream os;
    os << "robustness SDP ended with status " << sdp::to_string(sol.status) << " after " << sol.iterations
       << " iterations (gap " << sol.gap << ", primal residual " << sol.primal_residual << ")";
    throw SolverFailure(os.str());
  }

  RobustnessResult res;
  const double t = sol.primal_objective;
  res.value = std::max(0.0, t);
  res.lower_bound = sol.dual_objective;
  for (std::size_t b : layout.strategy) res.decomposition.push_back(lift(sol.primal_blocks[b], v) / (1.0 + t));
  res.optimal_noise.assign(n_in, std::vector<Matrix>(n_out));
  res.dual_witness.assign(n_in, std::vector<Matrix>(n_out));
  for (std::size_t x = 0; x < n_in; ++x)
    for (std::size_t a = 0; a < n_out; ++a) {
      res.optimal_noise[x][a] =
          t > kZeroRobustness ? Matrix(lift(sol.primal_blocks[layout.slack[x][a]], v) / t) : input[x][a];
      res.dual_witness[x][a] = lift(sdp::hermitian_multiplier(sol.dual_multipliers, layout.first_row[x][a], r), v);
    }
  res.balance_multiplier = spec.normalization == Normalization::None
                               ? Matrix(Matrix::Zero(v.rows(), v.rows()))
                               : lift(sdp::hermitian_multiplier(sol.dual_multipliers, balance_row, r), v);
  res.certificate = std::move(sol);
  return res;
}

Membership solve_membership(const Elements& input, const Matrix& v, InputKind kind) {
  const Eigen::Index r = v.cols();
  const Elements target = compress(input, v);
  sdp::Problem p;
  const Layout layout = add_decomposition(p, target, r, false);
  for (std::size_t b : layout.strategy) p.add_objective(b, identity(r));

  Membership m;
  m.certificate = sdp::solve(p, robustness_solver_options());
  const auto status = m.certificate.status;
  if (status == sdp::Status::Optimal) {
    m.member = true;
  } else if (status == sdp::Status::Infeasible) {
    m.member = false;
  } else {
    // Boundary cases can stall the feasibility program; decide by the robustness.
    const Matrix carrier = v * v.adjoint();
    const double value = kind == InputKind::State
                             ? steering_robustness(StateAssemblage(input)).value
                             : incompatibility_robustness(MeasurementAssemblage(input, carrier)).value;
    m.member = value <= 1e-7;
  }
  if (status == sdp::Status::Optimal) {
    for (std::size_t b : layout.strategy) m.decomposition.push_back(lift(m.certificate.primal_blocks[b], v));
    const DeterministicStrategySet strategies =
        enumerate_deterministic_strategies(input.size(), input.front().size());
    for (std::size_t x = 0; x < input.size(); ++x)
      for (std::size_t a = 0; a < input[x].size(); ++a) {
        Matrix sum = -input[x][a];
        for (std::size_t l = 0; l < strategies.size(); ++l)
          if (strategies.responds(l, x, a)) sum += m.decomposition[l];
        m.reconstruction_error = std::max(m.reconstruction_error, max_abs(sum));
      }
  }
  return m;
}

Matrix state_basis(const StateAssemblage& sigma) { return support_basis(reduced_state(sigma)); }

Matrix carrier_basis(const MeasurementAssemblage& e) { return support_basis(e.carrier()); }

}  // namespace

DeterministicStrategySet::DeterministicStrategySet(std::size_t n_inputs, std::size_t n_outputs)
    : n_inputs_(n_inputs), n_outputs_(n_outputs) {
  if (n_inputs == 0 || n_outputs == 0) throw DimensionMismatch("strategies need at least one input and outcome");
  std::size_t count = 1;
  for (std::size_t x = 0; x < n_inputs; ++x) {
    if (count > kMaxStrategies / n_outputs) {
      std::ostringstream os;
      os << n_outputs << "^" << n_inputs << " strategies exceed the limit " << kMaxStrategies;
      throw TooManyStrategies(os.str());
    }
    count *= n_outputs;
  }
  table_.assign(count, std::vector<std::size_t>(n_inputs, 0));
  for (std::size_t l = 0; l < count; ++l) {
    std::size_t rest = l;
    for (std::size_t x = n_inputs; x-- > 0;) {
      table_[l][x] = rest % n_outputs;
      rest /= n_outputs;
    }
  }
}

DeterministicStrategySet enumerate_deterministic_strategies(std::size_t n_inputs, std::size_t n_outputs) {
  return DeterministicStrategySet(n_inputs, n_outputs);
}

sdp::Options robustness_solver_options() {
  sdp::Options o;
  o.gap_tol = 1e-9;
  o.feas_tol = 1e-9;
  o.max_iters = 150;
  return o;
}

Membership lhs_membership(const StateAssemblage& sigma) {
  return solve_membership(sigma.elements(), state_basis(sigma), InputKind::State);
}

Membership jm_membership(const MeasurementAssemblage& e) {
  return solve_membership(e.elements(), carrier_basis(e), InputKind::Measurement);
}

NoiseModel NoiseModel::fixed(const Elements& noise) {
  const std::size_t n_in = noise.size();
  const std::size_t n_out = noise.front().size();
  const Eigen::Index d = noise.front().front().rows();
  std::vector<NoiseConstraint> constraints;
  for (std::size_t x = 0; x < n_in; ++x)
    for (std::size_t a = 0; a < n_out; ++a)
      for (const Matrix& c : sdp::hermitian_entry_basis(d)) {
        NoiseConstraint nc;
        nc.coefficients.assign(n_in, std::vector<Matrix>(n_out, Matrix::Zero(d, d)));
        nc.coefficients[x][a] = c;
        nc.rhs = (c * noise[x][a]).trace().real();
        constraints.push_back(std::move(nc));
      }
  return custom(std::move(constraints));
}

std::string to_string(NoiseModel::Kind kind) {
  switch (kind) {
    case NoiseModel::Kind::GeneralState: return "general_state";
    case NoiseModel::Kind::ConsistentState: return "consistent_state";
    case NoiseModel::Kind::GeneralMeasurement: return "general_measurement";
    case NoiseModel::Kind::Custom: return "custom";
  }
  return "unknown";
}

RobustnessResult steering_robustness(const StateAssemblage& sigma) {
  return robustness_with_noise_model(sigma, NoiseModel::general_state());
}

RobustnessResult consistent_steering_robustness(const StateAssemblage& sigma) {
  return robustness_with_noise_model(sigma, NoiseModel::consistent_state());
}

RobustnessResult incompatibility_robustness(const MeasurementAssemblage& e) {
  return robustness_with_noise_model(e, NoiseModel::general_measurement());
}

RobustnessResult robustness_with_noise_model(const StateAssemblage& sigma, const NoiseModel& model,
                                             const sdp::Options& options) {
  const Matrix rho = reduced_state(sigma);
  switch (model.kind) {
    case NoiseModel::Kind::GeneralState:
      return solve_robustness(sigma.elements(), support_basis(rho), rho, {InputKind::State, Normalization::None, nullptr, options});
    case NoiseModel::Kind::ConsistentState:
      return solve_robustness(sigma.elements(), support_basis(rho), rho,
                              {InputKind::State, Normalization::Consistent, nullptr, options});
    case NoiseModel::Kind::Custom:
      check_custom(model.constraints, sigma.n_inputs(), sigma.n_outputs(), sigma.dim());
      return solve_robustness(sigma.elements(), identity(sigma.dim()), rho,
                              {InputKind::State, Normalization::None, &model.constraints, options});
    case NoiseModel::Kind::GeneralMeasurement:
      break;
  }
  throw UnrepresentableNoiseModel("noise model '" + to_string(model.kind) + "' does not apply to state assemblages");
}

RobustnessResult robustness_with_noise_model(const MeasurementAssemblage& e, const NoiseModel& model,
                                             const sdp::Options& options) {
  switch (model.kind) {
    case NoiseModel::Kind::GeneralMeasurement:
      return solve_robustness(e.elements(), carrier_basis(e), e.carrier(),
                              {InputKind::Measurement, Normalization::Carrier, nullptr, options});
    case NoiseModel::Kind::Custom: {
      check_custom(model.constraints, e.n_inputs(), e.n_outputs(), e.dim());
      // Noise stays on the carrier, so the constraints are read there too.
      const Matrix v = carrier_basis(e);
      std::vector<NoiseConstraint> compressed = model.constraints;
      for (auto& nc : compressed) nc.coefficients = compress(nc.coefficients, v);
      return solve_robustness(e.elements(), v, e.carrier(),
                              {InputKind::Measurement, Normalization::Carrier, &compressed, options});
    }
    case NoiseModel::Kind::GeneralState:
    case NoiseModel::Kind::ConsistentState:
      break;
  }
  throw UnrepresentableNoiseModel("noise model '" + to_string(model.kind) +
                                  "' does not apply to measurement assemblages");
}

Matrix incompatibility_dual_density(const RobustnessResult& ir, const MeasurementAssemblage& e) {
  const Matrix& y = ir.balance_multiplier;
  const double r = static_cast<double>(e.carrier_rank());
  Matrix eta = ((1.0 + real_trace(y)) / r) * e.carrier() - y;
  // Clip solver-level negativity and renormalize.
  const Spectrum s = spectral_decompose(hermitian_part(eta));
  eta = s.vectors * s.values.cwiseMax(0.0).cast<Complex>().asDiagonal() * s.vectors.adjoint();
  return hermitian_part(eta / real_trace(eta));
}

StateAssemblage induced_assemblage(const MeasurementAssemblage& e, const Matrix& t) {
  if (t.cols() != e.dim()) throw DimensionMismatch("induced_assemblage: operator does not act on the effects");
  const double norm = real_trace(t * e.carrier() * t.adjoint());
  if (!(norm > 0.0)) throw DomainError("induced_assemblage: operator annihilates the carrier");
  return StateAssemblage(scale_elements(conjugate_elements(e.elements(), t), 1.0 / norm));
}

InducedIncompatibility steering_induced_incompatibility(const MeasurementAssemblage& e, SteeringMeasure measure,
                                                        const InducedIncompatibilityConfig& config) {
  const Matrix v = carrier_basis(e);
  const Eigen::Index d = e.dim();
  const Eigen::Index r = v.cols();
  const Elements reduced = compress(e.elements(), v);

  InducedIncompatibility best;
  best.lower_bound = -1.0;

  auto evaluate = [&](const Matrix& t) {
    const StateAssemblage sigma = induced_assemblage(e, t);
    ++best.evaluations;
    return measure == SteeringMeasure::SR ? steering_robustness(sigma) : consistent_steering_robustness(sigma);
  };
  auto record = [&](const Matrix& t, double value) {
    if (value <= best.lower_bound) return;
    best.lower_bound = value;
    const Matrix tt = hermitian_part(t * e.carrier() * t.adjoint());
    best.eta = tt / real_trace(tt);
    best.u = polar_decompose(t * e.carrier()).unitary;
  };

  std::vector<Matrix> starts;
  starts.push_back(e.carrier() / std::sqrt(static_cast<double>(r)));
  if (measure == SteeringMeasure::SR) {
    const Matrix eta = incompatibility_dual_density(incompatibility_robustness(e), e);
    starts.push_back(matrix_sqrt(eta) * e.carrier());
  }
  for (int k = static_cast<int>(starts.size()); k < config.n_restarts; ++k) {
    auto rng = random::derive(config.seed, static_cast<std::uint64_t>(k));
    starts.push_back(random::ginibre(rng, d, d) * e.carrier());
  }

  for (const Matrix& start : starts) {
    Matrix t = start;
    RobustnessResult current = evaluate(t);
    record(t, current.value);
    if (measure != SteeringMeasure::SR) continue;
    for (int it = 0; it < config.max_iters; ++it) {
      // Maximize sum tr(F T E T^dagger) / ||T V||^2 over the d x r operator T V.
      Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(d * r, d * r);
      for (std::size_t x = 0; x < reduced.size(); ++x)
        for (std::size_t a = 0; a < reduced[x].size(); ++a)
          q += kron(reduced[x][a].transpose(), current.dual_witness[x][a]);
      const Spectrum s = spectral_decompose(hermitian_part(q));
      Matrix tv(d, r);
      for (Eigen::Index c = 0; c < r; ++c) tv.col(c) = s.vectors.col(0).segment(c * d, d);
      const Matrix next = tv * v.adjoint();
      if (real_trace(next * e.carrier() * next.adjoint()) <= 1e-14) break;
      // Ascent steps can approach rank-deficient reduced states where the SDP
      // loses accuracy; the restart then ends at the last solved iterate.
      RobustnessResult candidate;
      try {
        candidate = evaluate(next);
      } catch (const SolverFailure&) {
        break;
      }
      const double gain = candidate.value - current.value;
      if (gain <= 1e-10) {
        if (gain > 0.0) record(next, candidate.value);
        break;
      }
      t = next;
      current = std::move(candidate);
      record(t, current.value);
    }
  }
  best.lower_bound = std::max(best.lower_bound, 0.0);
  return best;
}

}  // namespace distil
