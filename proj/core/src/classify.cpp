#include "selfsim/classify.hpp"

#include "selfsim/registry.hpp"

namespace selfsim {

const char* algebra_verdict_name(AlgebraVerdict v) {
  switch (v) {
    case AlgebraVerdict::CuntzAlgebra: return "cuntz-algebra";
    case AlgebraVerdict::NotGraphSeparated: return "not-graph-separated";
    case AlgebraVerdict::Undetermined: return "undetermined";
  }
  return "?";
}

ClassificationReport classify(const IfsSystem& system, int depth, double tol,
                              const std::optional<Region>& osc_witness) {
  ClassificationReport report;
  report.depth = depth;
  report.tol = tol;

  std::optional<Region> witness = osc_witness;
  const RegistryEntry* entry = find_registry_entry(system.name());
  if (!witness && entry) witness = entry->osc_witness;

  report.separation = check_separations(system, depth, tol, witness);
  report.branch = branch_scan(system, depth, tol);
  if (entry) report.metadata = entry->metadata;

  report.branch_finite = report.branch.cardinality != BranchCardinality::InfiniteAtResolution;
  report.branch_count =
      report.branch.cardinality == BranchCardinality::Finite ? report.branch.finite_count : 0;
  if (report.branch.cardinality == BranchCardinality::Finite)
    report.dim_A_mod_IX = report.branch.finite_count;

  switch (report.separation.graph.verdict) {
    case Verdict::Holds:
      report.verdict = AlgebraVerdict::CuntzAlgebra;
      report.cuntz_n = system.map_count();
      break;
    case Verdict::Fails:
      report.verdict = AlgebraVerdict::NotGraphSeparated;
      report.obstruction_tag =
          report.separation.open_set.verdict == Verdict::Holds
              ? "simple, purely infinite (open set condition verified)"
              : "obstruction report only (open set condition not verified)";
      break;
    case Verdict::Undetermined:
      report.verdict = AlgebraVerdict::Undetermined;
      break;
  }
  return report;
}

bool finite_projectivity_flag(const BranchReport& branch) { return branch.empty(); }

}  // namespace selfsim
