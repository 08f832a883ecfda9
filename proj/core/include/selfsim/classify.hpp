#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/cograph.hpp"

namespace selfsim {

enum class AlgebraVerdict { CuntzAlgebra, NotGraphSeparated, Undetermined };

const char* algebra_verdict_name(AlgebraVerdict v);

/// Classification outcome: a Cuntz-algebra label exactly when graph
/// separation holds; otherwise the branch-set obstruction, with the
/// qualitative simple/purely-infinite tag attached only when the open set
/// condition was verified. K-data strings are echoed registry metadata,
/// never computed.
struct ClassificationReport {
  SeparationReport separation;
  BranchReport branch;
  AlgebraVerdict verdict = AlgebraVerdict::Undetermined;
  int cuntz_n = 0;                      // when verdict == CuntzAlgebra
  std::size_t branch_count = 0;         // #B when finite
  bool branch_finite = false;
  std::size_t dim_A_mod_IX = 0;         // equals #B for finite B
  std::string obstruction_tag;
  std::vector<std::pair<std::string, std::string>> metadata;
  int depth = 0;
  double tol = 0.0;
};

ClassificationReport classify(const IfsSystem& system, int depth, double tol,
                              const std::optional<Region>& osc_witness = std::nullopt);

/// True iff the branch set is empty, equivalently the left action lands in
/// the compacts and X is finitely generated projective as a right module.
bool finite_projectivity_flag(const BranchReport& branch);

}  // namespace selfsim
