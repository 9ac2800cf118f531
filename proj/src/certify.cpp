#include "distil/certify.hpp"

#include "distil/errors.hpp"
#include "distil/filters.hpp"
#include "distil/free_ops.hpp"
#include "distil/ordering.hpp"
#include "distil/random.hpp"
#include "distil/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace distil::certify {

namespace {

constexpr double kEqualityTol = 1e-5;
constexpr double kBoundTol = 1e-6;
constexpr double kMonotoneTol = 1e-6;
constexpr double kReplayTol = 1e-6;
constexpr double kSuccessTol = 1e-7;
constexpr double kMinSuccess = 0.01;
constexpr double kRequiredSuccessRate = 0.95;

Check upper_check(std::size_t i, std::string quantity, double value, double bound, double tol) {
  Check c;
  c.instance = i;
  c.quantity = std::move(quantity);
  c.margin = bound - value;
  c.passed = c.margin >= -tol;
  std::ostringstream os;
  os.precision(12);
  os << value << " <= " << bound;
  c.note = os.str();
  return c;
}

void consistent_equality(const SuiteConfig& cfg, SuiteReport& rep) {
  for (std::size_t i = 0; i < cfg.n_instances; ++i) {
    auto rng = random::derive(cfg.seed, i);
    const MeasurementAssemblage e = random::random_povms(rng, 2, 2, 2);
    const double ir = incompatibility_robustness(e).value;
    const double src = consistent_steering_robustness(StateAssemblage(scale_elements(e.elements(), 0.5))).value;
    Check c;
    c.instance = i;
    c.quantity = "|IR(E) - SR^c(E/2)|";
    c.margin = kEqualityTol - std::abs(ir - src);
    c.passed = c.margin >= 0.0;
    std::ostringstream os;
    os.precision(12);
    os << "IR " << ir << ", SR^c " << src;
    c.note = os.str();
    rep.checks.push_back(c);
  }
}

void distillation_bound(const SuiteConfig& cfg, SuiteReport& rep) {
  for (std::size_t i = 0; i < cfg.n_instances; ++i) {
    auto rng = random::derive(cfg.seed, i);
    const StateAssemblage sigma = random::random_state_assemblage(rng, 2, 2, 2);
    const double bound = incompatibility_robustness(compute_seo(sigma)).value;
    for (int f = 0; f < 5; ++f) {
      FilterOutcome out = apply_filter(sigma, random::random_contraction(rng, 2));
      const double sr = steering_robustness(out.output).value;
      rep.checks.push_back(upper_check(i, "SR(filtered " + std::to_string(f) + ") <= IR(SEO)", sr, bound, kBoundTol));
    }
  }
}

void monotone(const SuiteConfig& cfg, SuiteReport& rep) {
  InducedIncompatibilityConfig is_cfg;
  is_cfg.n_restarts = std::max(cfg.restarts, 2);
  for (std::size_t i = 0; i < cfg.n_instances; ++i) {
    auto rng = random::derive(cfg.seed, i);
    const MeasurementAssemblage e = i % 2 == 0 ? random::random_projective_measurements(rng, 2, 2, 2)
                                               : random::random_povms(rng, 2, 2, 2);
    const MeasurementAssemblage out = apply_incompatibility_free_op(e, random_free_op(rng, RandomFreeOpShape{}));
    rep.checks.push_back(upper_check(i, "IR after <= IR before", incompatibility_robustness(out).value,
                                     incompatibility_robustness(e).value, kMonotoneTol));
    is_cfg.seed = cfg.seed + i;
    const double before = steering_induced_incompatibility(e, SteeringMeasure::SR, is_cfg).lower_bound;
    const double after = steering_induced_incompatibility(out, SteeringMeasure::SR, is_cfg).lower_bound;
    rep.checks.push_back(upper_check(i, "I_SR after <= I_SR before", after, before, kMonotoneTol));
  }
}

void round_trip(const SuiteConfig& cfg, SuiteReport& rep) {
  std::size_t successes = 0;
  for (std::size_t i = 0; i < cfg.n_instances; ++i) {
    auto rng = random::derive(cfg.seed, i);
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(i % 2);
    const StateAssemblage sigma = random::random_state_assemblage(rng, d, 2, 2);
    FilterOutcome target = apply_filter(sigma, random::random_contraction(rng, d));
    while (target.p_succ <= kMinSuccess) target = apply_filter(sigma, random::random_contraction(rng, d));

    OrderConfig ocfg;
    ocfg.n_restarts = cfg.restarts;
    ocfg.seed = cfg.seed * 1000003ULL + i;
    const OrderVerdict v = search_order_witness(sigma, target.output, ocfg);
    if (v.status == OrderVerdict::Status::RefutedByRank) {
      Check c;
      c.instance = i;
      c.quantity = "search verdict";
      c.margin = -std::numeric_limits<double>::infinity();
      c.passed = false;
      c.note = "filtered assemblage refuted by rank";
      rep.checks.push_back(c);
      continue;
    }
    if (v.status != OrderVerdict::Status::Holds) {
      ++rep.unknown;
      continue;
    }
    ++successes;
    const FilterKraus l = synthesize_filter(sigma, target.output, v.best->u);
    const FilterOutcome replay = apply_filter(sigma, l);
    const double err = max_entry_difference(replay.output.elements(), target.output.elements());
    rep.checks.push_back(upper_check(i, "replay error", err, 0.0, kReplayTol));
    const double p_max = 1.0 / v.best->lambda_opt;
    rep.checks.push_back(upper_check(i, "actual p_succ <= p_max", target.p_succ, p_max, kSuccessTol));
  }
  const double rate = cfg.n_instances == 0 ? 1.0 : static_cast<double>(successes) / cfg.n_instances;
  Check c;
  c.quantity = "search success rate";
  c.margin = rate - kRequiredSuccessRate;
  c.passed = c.margin >= 0.0;
  std::ostringstream os;
  os << successes << "/" << cfg.n_instances << " witnesses found, " << rep.unknown << " unknown";
  c.note = os.str();
  rep.checks.push_back(c);
}

}  // namespace

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::ConsistentEquality: return "obs1";
    case Suite::DistillationBound: return "thm3";
    case Suite::Monotone: return "monotone";
    case Suite::RoundTrip: return "roundtrip";
  }
  return "unknown";
}

Suite parse_suite(const std::string& name) {
  for (Suite s : {Suite::ConsistentEquality, Suite::DistillationBound, Suite::Monotone, Suite::RoundTrip})
    if (to_string(s) == name) return s;
  throw DomainError("unknown suite '" + name + "' (expected obs1, thm3, monotone or roundtrip)");
}

SuiteReport run_suite(Suite suite, const SuiteConfig& config) {
  SuiteReport rep;
  rep.suite = suite;
  rep.n_instances = config.n_instances;
  rep.seed = config.seed;
  switch (suite) {
    case Suite::ConsistentEquality:
      rep.tolerance = kEqualityTol;
      consistent_equality(config, rep);
      break;
    case Suite::DistillationBound:
      rep.tolerance = kBoundTol;
      distillation_bound(config, rep);
      break;
    case Suite::Monotone:
      rep.tolerance = kMonotoneTol;
      monotone(config, rep);
      break;
    case Suite::RoundTrip:
      rep.tolerance = kReplayTol;
      round_trip(config, rep);
      break;
  }
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const Check& c : rep.checks) {
    rep.worst_margin = std::min(rep.worst_margin, c.margin);
    rep.passed = rep.passed && c.passed;
  }
  return rep;
}

}  // namespace distil::certify
