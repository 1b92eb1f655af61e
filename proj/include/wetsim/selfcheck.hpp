#pragma once

#include <cstdint>
#include <iosfwd>

namespace wetsim::selfcheck {

struct Options {
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  /// Test hook: deliberately breaks the tolerance bookkeeping so the battery
  /// must report failure. Never set outside negative tests.
  bool corrupt_tolerances = false;
};

/// Internal-consistency battery: closed-form power laws against Monte Carlo,
/// singular-vector optimality against brute force, and the real-embedding
/// identities. Prints one line per check; returns true when all pass.
/// Tolerances widen as 1/sqrt(trials) so small smoke runs stay deterministic.
bool run(const Options& options, std::ostream& out);

}  // namespace wetsim::selfcheck
