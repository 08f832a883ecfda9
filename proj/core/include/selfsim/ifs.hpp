#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/contraction.hpp"
#include "selfsim/words.hpp"

namespace selfsim {

/// Closed ball that every map of a system sends into itself. All attractor
/// cells are obtained by pushing this ball through word compositions.
struct HullBall {
  Vec center;
  double radius = 0.0;
};

/// A system of N >= 2 affine proper contractions together with an invariant
/// hull ball. The attractor is the unique nonempty compact set equal to the
/// union of its images under the maps.
class IfsSystem {
public:
  IfsSystem(int dimension, std::vector<ContractionMap> maps, HullBall hull,
            std::string name = "");

  int dimension() const { return dimension_; }
  int map_count() const { return static_cast<int>(maps_.size()); }
  const std::vector<ContractionMap>& maps() const { return maps_; }
  const ContractionMap& map(int symbol) const;  // 1-based
  const HullBall& hull() const { return hull_; }
  const std::string& name() const { return name_; }

  /// max_i sigma_max(M_i); the global diameter decay rate.
  double max_upper_bound() const;
  /// min_i sigma_min(M_i).
  double min_lower_bound() const;

  /// gamma_w = gamma_{w1} o ... o gamma_{wm} as a single affine map.
  ContractionMap word_map(const Word& w) const;

  /// Fixed point of the first map, solving (I - M_1) p = t_1.
  Vec base_point() const;

  /// FNV-1a hash of the defining data; embedded in serialized reports so a
  /// function sample can be matched back to its system.
  std::uint64_t content_hash() const;

private:
  int dimension_;
  std::vector<ContractionMap> maps_;
  HullBall hull_;
  std::string name_;
};

/// Per-map certified Lipschitz constants plus hull invariance verdicts.
struct PropernessReport {
  struct MapEntry {
    double lower = 0.0;  // c_i
    double upper = 0.0;  // c'_i
    bool proper = false;
    bool hull_invariant = false;
  };
  std::vector<MapEntry> per_map;
  double max_upper = 0.0;
  bool all_proper = false;
  bool hull_invariant = false;
  std::string message;

  bool pass() const { return all_proper && hull_invariant; }
};

/// Checks 0 < c_i <= c'_i < 1 for every map and that each map sends the hull
/// ball into itself: |M_i c + t_i - c| + sigma_max(M_i) r <= r (up to eps).
PropernessReport verify_proper(const IfsSystem& system, double eps = 1e-9);

/// Apply the word composition to a point, outermost symbol first:
/// apply_word(u + v, x) == apply_word(u, apply_word(v, x)).
Vec apply_word(const IfsSystem& system, const Word& w, const Vec& x);

/// A certified enclosure of gamma_w(K): the ball contains the image of the
/// hull under gamma_w, and radius <= prod_k c'_{w_k} * hull.radius.
struct Cell {
  Word word;
  Vec center;
  double radius = 0.0;
};

/// The virtual tree of cells K_w. Cells are materialized on demand (subject
/// to a cap); membership queries descend the tree without materializing it.
class CellTree {
public:
  CellTree(const IfsSystem& system, int depth);

  const IfsSystem& system() const { return system_; }
  int depth() const { return depth_; }

  /// All depth-n cells in lexicographic word order. Throws ResourceLimitError
  /// when N^depth exceeds the cap.
  const std::vector<Cell>& cells(std::uint64_t cap = (1u << 21)) const;

  /// True when the point lies inside some depth-level cell, radius + tol.
  /// Pruned descent: a branch is abandoned as soon as the point leaves the
  /// enclosing ball, so cost stays near depth * N per query.
  bool contains(const Vec& point, double tol = 0.0) const;
  bool contains_at_depth(const Vec& point, int depth, double tol) const;

  /// Distance from the point to the union of depth-level cell balls
  /// (0 if inside one).
  double distance(const Vec& point) const;

private:
  IfsSystem system_;
  int depth_;
  mutable std::vector<Cell> cells_;  // filled by cells()
};

/// All K_w cells at the given depth, deterministic lexicographic order.
CellTree attractor_cells(const IfsSystem& system, int depth);

/// gamma_prefix(base point) together with the bound (max c')^len * 2r; every
/// infinite extension of the prefix codes a point within the bound.
struct CodedPoint {
  Vec point;
  double error_bound = 0.0;
};
CodedPoint coding_point(const IfsSystem& system, const Word& prefix);

/// d( coding_point(i + prefix), gamma_i(coding_point(prefix)) ). The two
/// compositions agree exactly in exact arithmetic; the returned residual is
/// bounded by the combined coding error bounds.
double semiconjugacy_residual(const IfsSystem& system, int symbol, const Word& prefix);

/// Deterministic seeded attractor sampler. Starts at the base point, applies
/// uniformly chosen maps, and emits points after the burn-in.
std::vector<Vec> chaos_game(const IfsSystem& system, std::uint64_t seed,
                            std::uint64_t iterations, std::uint64_t burn_in);

}  // namespace selfsim
