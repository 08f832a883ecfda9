#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "selfsim/ifs.hpp"
#include "selfsim/words.hpp"

namespace selfsim {

/// Canonical sample grid at depth m: the points gamma_w(p*) for all w in W_m
/// in lexicographic order, where p* is the fixed point of the first map.
/// Every grid point lies in its cell and approximates any coded point with
/// prefix w up to tol()/2.
///
/// Composition on the grid is word truncation: the symbol i carries the grid
/// word w to (i,w1,...,w_{m-1}). The truncated word's point differs from
/// gamma_i(point(w)) by at most (max c')^m * diam(hull) = tol()/2, and the
/// rule is exact word arithmetic, which keeps the sampled module identities
/// (invariance, commutation, disjoint supports) exact rather than
/// tolerance-loose.
class SampleGrid {
public:
  SampleGrid(const IfsSystem& system, int depth, std::uint64_t cap = (1u << 22));

  const IfsSystem& system() const { return system_; }
  int depth() const { return depth_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(points_.size()); }
  const Vec& point(std::uint64_t index) const { return points_[index]; }
  const std::vector<Vec>& points() const { return points_; }
  const Vec& base_point() const { return base_; }
  const WordTable& words() const { return table_; }

  /// 2 * (max c')^m * diam(hull); the default tolerance for grid-resolution
  /// comparisons.
  double tol() const { return tol_; }

  /// Grid word of gamma_symbol applied to the grid word `index` (truncation).
  std::uint64_t compose(int symbol, std::uint64_t index) const {
    return table_.prepend_trunc(symbol, index);
  }
  /// Truncated composition through a whole word, outermost symbol first.
  std::uint64_t compose_word(const Word& w, std::uint64_t index) const;

  /// Nearest grid point to an arbitrary point; ties broken by smallest
  /// lexicographic word. Backed by a uniform bucket index.
  std::uint64_t nearest(const Vec& p) const;

  std::uint64_t content_hash() const;  // system hash mixed with depth

private:
  IfsSystem system_;
  int depth_;
  WordTable table_;
  Vec base_;
  std::vector<Vec> points_;
  double tol_;

  // bucket index for nearest()
  struct BucketIndex;
  std::shared_ptr<const BucketIndex> buckets() const;
  mutable std::shared_ptr<const BucketIndex> buckets_;
};

using GridPtr = std::shared_ptr<const SampleGrid>;

GridPtr make_grid(const IfsSystem& system, int depth, std::uint64_t cap = (1u << 22));

}  // namespace selfsim
