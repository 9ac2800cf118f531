#pragma once

// Randomized checks of the quantified invariants. Instance i draws from
// random::derive(seed, i), so a suite is reproducible from its seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace distil::certify {

enum class Suite {
  /// |IR(E) - SR^c(E/2)| on random qubit measurement assemblages.
  ConsistentEquality,
  /// SR(filtered sigma) <= IR(SEO of sigma) for five random filters per sigma.
  DistillationBound,
  /// IR and the I_SR lower bound do not increase under random free operations.
  Monotone,
  /// Order witness search on filtered assemblages and filter synthesis replay.
  RoundTrip,
};

std::string to_string(Suite suite);
/// Accepts "obs1", "thm3", "monotone", "roundtrip"; throws DomainError otherwise.
Suite parse_suite(const std::string& name);

struct Check {
  std::size_t instance = 0;
  std::string quantity;
  /// Signed slack: >= -tolerance passes. For gap checks this is tolerance - gap.
  double margin = 0.0;
  bool passed = true;
  std::string note;
};

struct SuiteReport {
  Suite suite = Suite::ConsistentEquality;
  std::size_t n_instances = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<Check> checks;
  /// Round trip only: instances where the search ended Unknown.
  std::size_t unknown = 0;
  double worst_margin = 0.0;
  bool passed = true;
};

struct SuiteConfig {
  std::size_t n_instances = 20;
  std::uint64_t seed = 0;
  /// Round trip: restarts per search; monotone: I_SR restarts.
  int restarts = 20;
};

/// Tolerances: obs1 1e-5, thm3 1e-6, monotone 1e-6, roundtrip 1e-6 (replay)
/// and 1e-7 (success probability). The round trip also fails when fewer than
/// 95% of the searches succeed.
SuiteReport run_suite(Suite suite, const SuiteConfig& config);

}  // namespace distil::certify
