#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "selfsim/geometry.hpp"
#include "selfsim/grid.hpp"
#include "selfsim/ifs.hpp"

namespace selfsim {

enum class Verdict { Holds, Fails, Undetermined };

const char* verdict_name(Verdict v);

/// Solution set of gamma_i(y) = gamma_j(y), solved exactly as the linear
/// system (M_i - M_j) y = t_j - t_i. The only approximate step is membership
/// of the solution set in the attractor, resolved against cells at the tree
/// depth.
struct PairSolution {
  enum class Kind { Empty, Points, Affine };

  int i = 0, j = 0;
  Kind kind = Kind::Empty;

  /// Isolated solutions that pass the cell-membership test.
  std::vector<Vec> points;

  /// Affine solution set y = anchor + span(basis columns); for a line the
  /// param_intervals list the parameter ranges where the line pierces
  /// depth-level cells (merged, sorted).
  Vec anchor;
  Mat basis;
  std::vector<std::pair<double, double>> param_intervals;

  int subspace_dim() const { return kind == Kind::Affine ? static_cast<int>(basis.cols()) : 0; }
  bool nonempty() const {
    return !points.empty() || (kind == Kind::Affine && !param_intervals.empty());
  }
};

PairSolution branch_solve(const IfsSystem& system, int i, int j, const CellTree& tree,
                          double tol = 1e-9);

/// One detected branch point: x = gamma_i(y) for every i in `indices`,
/// e(x,y) = indices.size() >= 2.
struct BranchPointRecord {
  Vec x;
  Vec y;
  std::vector<int> indices;
  int index() const { return static_cast<int>(indices.size()); }
};

/// x-space descriptor of a one-parameter family of branch points.
struct BranchSegment {
  int i = 0, j = 0;
  Vec anchor;      // gamma_i(line anchor)
  Vec direction;   // gamma_i's image of the line direction (unit in y-space)
  std::vector<std::pair<double, double>> intervals;  // same parameters as y-line
};

enum class BranchCardinality { Empty, Finite, InfiniteAtResolution };

struct BranchReport {
  int depth = 0;
  double tol = 0.0;
  std::vector<PairSolution> pairs;             // lexicographic (i,j), i < j
  std::vector<BranchPointRecord> points;       // deduplicated isolated branch points
  std::vector<BranchSegment> segments;
  BranchCardinality cardinality = BranchCardinality::Empty;
  std::size_t finite_count = 0;

  bool empty() const { return cardinality == BranchCardinality::Empty; }
};

BranchReport branch_scan(const IfsSystem& system, int depth, double tol = 1e-9);

/// Groups {gamma_i(y)} by exact coincidence and returns one record per group;
/// the branch indices over the groups sum to N.
std::vector<BranchPointRecord> branch_index(const IfsSystem& system, const Vec& y,
                                            const CellTree& tree, double tol = 1e-9);

/// I(x): symbols whose inverse image of x exists and lies in the attractor at
/// the tree's resolution. Symbols with singular linear part are reported
/// separately as undetermined.
struct IndexSet {
  std::vector<int> members;
  std::vector<int> undetermined;
};
IndexSet index_set(const IfsSystem& system, const Vec& x, const CellTree& tree,
                   double tol = 1e-9);

struct SeparationVerdict {
  Verdict verdict = Verdict::Undetermined;
  std::optional<Vec> witness;
  double gap = 0.0;    // certified lower bound on the pairwise set distance when Holds
  int depth = 0;
  std::string detail;
};

/// Graph separation holds iff the branch scan comes back empty; on failure
/// the witness is a branch point.
SeparationVerdict check_graph_separation(const IfsSystem& system, int depth,
                                         double tol = 1e-9);

/// Branch-and-bound over cell pairs: a positive minimal gap certifies
/// disjoint images; overlapping cells at the maximal depth yield
/// fails-at-resolution with a witness; an exhausted pair budget yields
/// undetermined with the tightest gap found.
SeparationVerdict check_strong_separation(const IfsSystem& system, int max_depth,
                                          double tol = 1e-9,
                                          std::uint64_t pair_budget = (1u << 22));

struct OscVerdict {
  Verdict verdict = Verdict::Undetermined;
  std::optional<Vec> witness;  // violation point on Fails
  std::string detail;
};

/// Verifies gamma_i(V) in V by exact region mapping and pairwise
/// disjointness of the images. V must be a box, ball, polygon, a finite
/// union of those, or the hull interior.
OscVerdict check_open_set_condition(const IfsSystem& system, const Region& witness,
                                    int depth = 6, int samples = 64);

struct SeparationReport {
  SeparationVerdict strong;
  SeparationVerdict graph;
  OscVerdict open_set;
  std::optional<Region> witness_region;
  int depth = 0;
  double tol = 0.0;
};

SeparationReport check_separations(const IfsSystem& system, int depth, double tol,
                                   const std::optional<Region>& osc_witness);

/// Sampled union-of-cographs over a grid: for every grid point y the symbols
/// are partitioned by exact coincidence of gamma_i(y). Functions on the
/// cograph carry one value per (symbol, grid word) key and must agree within
/// a merge class.
class CographSample {
public:
  explicit CographSample(GridPtr grid, double merge_tol = 1e-12);

  const SampleGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  int symbol_count() const { return grid_->system().map_count(); }

  /// Smallest symbol whose image of grid point u coincides with symbol i's.
  int merge_rep(int symbol, std::uint64_t u) const {
    return reps_[static_cast<std::size_t>(symbol - 1) * grid_->size() + u];
  }
  bool has_merges() const { return has_merges_; }

  /// Grid words with at least one nontrivial merge class.
  const std::vector<std::uint64_t>& merged_points() const { return merged_points_; }

private:
  GridPtr grid_;
  std::vector<int> reps_;  // N * G, lex-smallest symbol of each merge class
  std::vector<std::uint64_t> merged_points_;
  bool has_merges_ = false;
};

using CographSamplePtr = std::shared_ptr<const CographSample>;

CographSamplePtr make_cograph_sample(GridPtr grid, double merge_tol = 1e-12);

/// Materialized modified path space of length n over a grid: for every
/// (w, y) the tuple (gamma_w(y), gamma_{w2..wn}(y), ..., gamma_{wn}(y), y),
/// coordinates computed by suffix composition.
struct PathSample {
  GridPtr grid;
  int path_depth = 0;
  // coords[key * (n+1) + k] = k-th tuple coordinate, key = w_index * G + u
  std::vector<Vec> coords;

  std::uint64_t key_count() const {
    return coords.empty() ? 0 : static_cast<std::uint64_t>(coords.size()) / (path_depth + 1);
  }
  const Vec& coord(std::uint64_t key, int k) const {
    return coords[key * static_cast<std::uint64_t>(path_depth + 1) + static_cast<std::uint64_t>(k)];
  }
};

PathSample build_path_sample(GridPtr grid, int path_depth, std::uint64_t cap = (1u << 22));

}  // namespace selfsim
