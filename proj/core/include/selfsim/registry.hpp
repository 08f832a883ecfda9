#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selfsim/classify.hpp"

namespace selfsim {

enum class ExpectedBranch { Empty, Finite, InfiniteAtResolution, NonEmpty };

/// One builtin example system with its expected verdicts and the source
/// K-data echoed as literal strings.
struct RegistryEntry {
  std::string name;
  std::string description;
  IfsSystem system;
  std::optional<Region> osc_witness;
  int grid_depth = 8;  // canonical sample-grid depth for function-space work

  Verdict expect_strong = Verdict::Undetermined;
  Verdict expect_graph = Verdict::Undetermined;
  Verdict expect_osc = Verdict::Undetermined;
  AlgebraVerdict expect_verdict = AlgebraVerdict::Undetermined;
  int expect_cuntz_n = 0;
  ExpectedBranch expect_branch = ExpectedBranch::Empty;
  std::size_t expect_branch_count = 0;

  /// Golden x-space branch segments (endpoint pairs), when the source states
  /// the branch set explicitly.
  std::vector<std::pair<Vec, Vec>> golden_branch_segments;

  std::vector<std::pair<std::string, std::string>> metadata;
};

/// The ten builtin systems: cantor, full-shift-3, tent, tent-modified, koch,
/// koch-modified, gasket, gasket-modified, carpet, carpet-modified.
const std::vector<RegistryEntry>& builtin_registry();

const RegistryEntry* find_registry_entry(const std::string& name);

struct RegistryRow {
  std::string name;
  bool pass = false;
  std::string deltas;  // human-readable mismatches when failing
  ClassificationReport report;
  double seconds = 0.0;
};

struct RegistryVerifyResult {
  std::vector<RegistryRow> rows;
  bool pass = false;
  double seconds = 0.0;
  int depth = 0;
  double tol = 0.0;
};

/// Classifies every registry system and compares against the expected
/// verdicts; for entries with golden branch segments also checks the
/// detected set against them (coverage and Hausdorff at the depth's
/// resolution). Metadata is echoed, never recomputed.
RegistryVerifyResult registry_verify(int depth = 10, double tol = 1e-9);

}  // namespace selfsim
