#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sllg/grid.hpp"

namespace sllg {

/// Settings of the operator identity suite run by `sllg check`.
struct IdentitySuiteConfig {
  int points = 64;
  double extent = SpectralGrid::kTwoPi;
  int trials = 50;
  /// Highest integer frequency of the random fields.
  int max_frequency = 4;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  /// Debug hook: negates the right-hand side of the named identity so that
  /// the suite can be seen to fail.
  std::optional<std::string> fault;
};

struct IdentityOutcome {
  std::string name;
  /// Largest relative residual over the trials.
  double worst = 0.0;
  int trials = 0;
  bool passed = false;
};

struct IdentityReport {
  double tolerance = 0.0;
  std::vector<IdentityOutcome> outcomes;

  bool passed() const;
};

/// Names accepted by IdentitySuiteConfig::fault, in report order.
const std::vector<std::string>& identity_names();

/// Runs every identity on `trials` random band-limited triples (u, w, phi)
/// in 2D. Throws std::invalid_argument for an unknown fault name.
IdentityReport run_identity_suite(const IdentitySuiteConfig& cfg);

}  // namespace sllg
