#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selfsim/registry.hpp"

namespace selfsim {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst error / margin observed, check-specific
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool pass = false;
  double seconds = 0.0;
};

/// Norm equivalence, tensor/path isometry, adjoint and sesquilinear
/// identities, branch-consistency preservation, and the compactness
/// dichotomy probes.
SuiteResult run_bimodule_suite(std::uint64_t seed);

/// Transfer-operator identities, invariance descent, commutation residuals,
/// amplification and normalization witnesses, separating-function contracts.
SuiteResult run_transfer_suite(std::uint64_t seed);

/// The golden example table at the given resolution.
SuiteResult run_registry_suite(int depth = 10, double tol = 1e-9);

/// The acceptance criteria, one CheckResult per criterion, in order.
/// Criterion 9 is a declaration (always pass, no computation).
std::vector<CheckResult> run_acceptance(std::uint64_t seed = 42);

}  // namespace selfsim
