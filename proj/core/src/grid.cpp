#include "selfsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"

namespace selfsim {

// Uniform spatial hash over the hull box; nearest() scans outward ring by
// ring until the best candidate cannot be beaten.
struct SampleGrid::BucketIndex {
  Vec lo;
  double cell = 0.0;
  int dims = 0;
  std::vector<int> shape;
  std::vector<std::vector<std::uint64_t>> buckets;

  std::size_t flat(const std::vector<int>& coord) const {
    std::size_t out = 0;
    for (int k = 0; k < dims; ++k)
      out = out * static_cast<std::size_t>(shape[static_cast<std::size_t>(k)]) +
            static_cast<std::size_t>(coord[static_cast<std::size_t>(k)]);
    return out;
  }

  std::vector<int> coord_of(const Vec& p) const {
    std::vector<int> c(static_cast<std::size_t>(dims));
    for (int k = 0; k < dims; ++k) {
      int v = static_cast<int>(std::floor((p(k) - lo(k)) / cell));
      c[static_cast<std::size_t>(k)] =
          std::clamp(v, 0, shape[static_cast<std::size_t>(k)] - 1);
    }
    return c;
  }
};

SampleGrid::SampleGrid(const IfsSystem& system, int depth, std::uint64_t cap)
    : system_(system), depth_(depth), table_(system.map_count(), depth) {
  if (depth < 0) throw InvalidInputError("grid depth must be nonnegative");
  std::uint64_t total = table_.size();
  if (total > cap)
    throw ResourceLimitError("grid at depth " + std::to_string(depth) + " needs " +
                             std::to_string(total) + " points, cap is " + std::to_string(cap));
  base_ = system_.base_point();
  // build level by level: the point for the word (i, w) is gamma_i of the
  // point for w, and prepending i is the most significant digit of the
  // lexicographic index, so pushing i-major keeps the order aligned
  std::vector<Vec> level{base_};
  for (int d = 0; d < depth; ++d) {
    std::vector<Vec> next;
    next.reserve(level.size() * static_cast<std::size_t>(system_.map_count()));
    for (int i = 1; i <= system_.map_count(); ++i)
      for (const auto& p : level) next.push_back(system_.map(i).apply(p));
    level = std::move(next);
  }
  points_ = std::move(level);
  tol_ = 2.0 * std::pow(system_.max_upper_bound(), depth) * 2.0 * system_.hull().radius;
}

std::uint64_t SampleGrid::compose_word(const Word& w, std::uint64_t index) const {
  for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it)
    index = compose(*it, index);
  return index;
}

std::shared_ptr<const SampleGrid::BucketIndex> SampleGrid::buckets() const {
  if (buckets_) return buckets_;
  auto idx = std::make_shared<BucketIndex>();
  const auto& hull = system_.hull();
  idx->dims = system_.dimension();
  idx->lo = hull.center.array() - hull.radius;
  // aim for a handful of points per bucket
  double target = std::pow(static_cast<double>(points_.size()),
                           1.0 / static_cast<double>(idx->dims));
  int per_dim = std::clamp(static_cast<int>(target / 2.0) + 1, 1, 4096);
  idx->cell = 2.0 * hull.radius / per_dim;
  idx->shape.assign(static_cast<std::size_t>(idx->dims), per_dim);
  std::size_t total = 1;
  for (int s : idx->shape) total *= static_cast<std::size_t>(s);
  idx->buckets.resize(total);
  for (std::uint64_t k = 0; k < points_.size(); ++k)
    idx->buckets[idx->flat(idx->coord_of(points_[k]))].push_back(k);
  buckets_ = idx;
  return buckets_;
}

std::uint64_t SampleGrid::nearest(const Vec& p) const {
  if (p.size() != system_.dimension()) throw InvalidInputError("point dimension mismatch");
  auto idx = buckets();
  const auto center = idx->coord_of(p);
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_word = 0;
  auto consider = [&](const std::vector<std::uint64_t>& bucket) {
    for (std::uint64_t k : bucket) {
      double d = (points_[k] - p).norm();
      if (d < best - 1e-15 || (std::abs(d - best) <= 1e-15 && k < best_word)) {
        best = d;
        best_word = k;
      }
    }
  };
  int max_ring = 0;
  for (int s : idx->shape) max_ring = std::max(max_ring, s);
  for (int ring = 0; ring <= max_ring; ++ring) {
    // scan cells whose Chebyshev distance from the center cell equals ring
    if (idx->dims == 1) {
      for (int dx : {-ring, ring}) {
        int x = center[0] + dx;
        if (x < 0 || x >= idx->shape[0]) continue;
        consider(idx->buckets[static_cast<std::size_t>(x)]);
        if (ring == 0) break;
      }
    } else {
      for (int dx = -ring; dx <= ring; ++dx) {
        for (int dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          std::vector<int> c{center[0] + dx, center[1] + dy};
          if (c[0] < 0 || c[0] >= idx->shape[0] || c[1] < 0 || c[1] >= idx->shape[1]) continue;
          consider(idx->buckets[idx->flat(c)]);
        }
      }
    }
    // once a candidate is found, one extra ring guarantees correctness
    if (best < std::numeric_limits<double>::infinity() &&
        best <= (ring - 1) * idx->cell)
      break;
  }
  return best_word;
}

std::uint64_t SampleGrid::content_hash() const {
  std::uint64_t h = system_.content_hash();
  h ^= static_cast<std::uint64_t>(depth_) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

GridPtr make_grid(const IfsSystem& system, int depth, std::uint64_t cap) {
  return std::make_shared<SampleGrid>(system, depth, cap);
}

}  // namespace selfsim
