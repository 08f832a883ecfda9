#include "selfsim/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "selfsim/errors.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

// ---------------------------------------------------------------------------
// WordTable

WordTable::WordTable(int alphabet, int length) : alphabet_(alphabet), length_(length) {
  if (alphabet < 1) throw InvalidInputError("word table needs an alphabet of size >= 1");
  if (length < 0) throw InvalidInputError("word table length must be nonnegative");
  size_ = pow_u64(alphabet, length);
  msd_ = length > 0 ? pow_u64(alphabet, length - 1) : 1;
}

std::uint64_t WordTable::index_of(const Word& w) const {
  if (static_cast<int>(w.length()) != length_)
    throw InvalidInputError("word length does not match table");
  w.validate(alphabet_);
  std::uint64_t idx = 0;
  for (int s : w.symbols) idx = idx * static_cast<std::uint64_t>(alphabet_) +
                                static_cast<std::uint64_t>(s - 1);
  return idx;
}

Word WordTable::word_at(std::uint64_t index) const {
  if (index >= size_) throw InvalidInputError("word index out of range");
  std::vector<int> symbols(static_cast<std::size_t>(length_));
  for (int k = length_ - 1; k >= 0; --k) {
    symbols[static_cast<std::size_t>(k)] =
        static_cast<int>(index % static_cast<std::uint64_t>(alphabet_)) + 1;
    index /= static_cast<std::uint64_t>(alphabet_);
  }
  return Word(std::move(symbols));
}

std::uint64_t pow_u64(int base, int exp) {
  std::uint64_t out = 1;
  for (int k = 0; k < exp; ++k) {
    if (out > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(base))
      throw ResourceLimitError("word space size overflows 64 bits");
    out *= static_cast<std::uint64_t>(base);
  }
  return out;
}

// ---------------------------------------------------------------------------
// IfsSystem

IfsSystem::IfsSystem(int dimension, std::vector<ContractionMap> maps, HullBall hull,
                     std::string name)
    : dimension_(dimension), maps_(std::move(maps)), hull_(std::move(hull)),
      name_(std::move(name)) {
  if (dimension_ < 1) throw InvalidInputError("system dimension must be >= 1");
  if (maps_.size() < 2) throw InvalidInputError("a system needs at least two maps");
  for (const auto& m : maps_) {
    if (m.matrix.rows() != dimension_ || m.matrix.cols() != dimension_ ||
        m.offset.size() != dimension_)
      throw InvalidInputError("map dimensions do not match the system dimension");
  }
  if (hull_.center.size() != dimension_)
    throw InvalidInputError("hull center dimension mismatch");
  if (!(hull_.radius > 0.0)) throw InvalidInputError("hull radius must be positive");
}

const ContractionMap& IfsSystem::map(int symbol) const {
  if (symbol < 1 || symbol > map_count())
    throw InvalidInputError("map symbol " + std::to_string(symbol) + " out of range");
  return maps_[static_cast<std::size_t>(symbol - 1)];
}

double IfsSystem::max_upper_bound() const {
  double out = 0.0;
  for (const auto& m : maps_) out = std::max(out, m.upper_bound());
  return out;
}

double IfsSystem::min_lower_bound() const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& m : maps_) out = std::min(out, m.lower_bound());
  return out;
}

ContractionMap IfsSystem::word_map(const Word& w) const {
  w.validate(map_count());
  ContractionMap acc(Mat::Identity(dimension_, dimension_), Vec::Zero(dimension_));
  for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it)
    acc = map(*it).compose(acc);
  return acc;
}

Vec IfsSystem::base_point() const {
  const ContractionMap& m1 = maps_.front();
  Mat lhs = Mat::Identity(dimension_, dimension_) - m1.matrix;
  return lhs.fullPivLu().solve(m1.offset);
}

std::uint64_t IfsSystem::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= p[k];
      h *= 1099511628211ull;
    }
  };
  auto mix_double = [&](double v) { mix(&v, sizeof(v)); };
  mix_double(static_cast<double>(dimension_));
  for (const auto& m : maps_) {
    for (int r = 0; r < m.matrix.rows(); ++r)
      for (int c = 0; c < m.matrix.cols(); ++c) mix_double(m.matrix(r, c));
    for (int r = 0; r < m.offset.size(); ++r) mix_double(m.offset(r));
  }
  for (int r = 0; r < hull_.center.size(); ++r) mix_double(hull_.center(r));
  mix_double(hull_.radius);
  return h;
}

// ---------------------------------------------------------------------------
// Properness

PropernessReport verify_proper(const IfsSystem& system, double eps) {
  PropernessReport report;
  report.all_proper = true;
  report.hull_invariant = true;
  const auto& hull = system.hull();
  for (int i = 1; i <= system.map_count(); ++i) {
    const auto& m = system.map(i);
    PropernessReport::MapEntry entry;
    auto [c, cp] = contraction_bounds(m);
    entry.lower = c;
    entry.upper = cp;
    entry.proper = c > 0.0 && cp < 1.0;
    double drift = (m.apply(hull.center) - hull.center).norm();
    entry.hull_invariant = drift + cp * hull.radius <= hull.radius * (1.0 + eps) + eps;
    report.max_upper = std::max(report.max_upper, cp);
    if (!entry.proper) {
      report.all_proper = false;
      report.message += "map " + std::to_string(i) + " not proper (c=" + std::to_string(c) +
                        ", c'=" + std::to_string(cp) + "); ";
    }
    if (!entry.hull_invariant) {
      report.hull_invariant = false;
      report.message += "map " + std::to_string(i) + " does not keep the hull invariant; ";
    }
    report.per_map.push_back(entry);
  }
  return report;
}

Vec apply_word(const IfsSystem& system, const Word& w, const Vec& x) {
  w.validate(system.map_count());
  if (x.size() != system.dimension()) throw InvalidInputError("point dimension mismatch");
  Vec out = x;
  for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it)
    out = system.map(*it).apply(out);
  return out;
}

// ---------------------------------------------------------------------------
// CellTree

CellTree::CellTree(const IfsSystem& system, int depth) : system_(system), depth_(depth) {
  if (depth < 0) throw InvalidInputError("cell tree depth must be nonnegative");
}

const std::vector<Cell>& CellTree::cells(std::uint64_t cap) const {
  if (!cells_.empty() || depth_ == 0) {
    if (cells_.empty()) {
      cells_.push_back(Cell{Word{}, system_.hull().center, system_.hull().radius});
    }
    return cells_;
  }
  const int n = system_.map_count();
  std::uint64_t total = pow_u64(n, depth_);
  if (total > cap)
    throw ResourceLimitError("cell tree at depth " + std::to_string(depth_) + " needs " +
                             std::to_string(total) + " cells, cap is " + std::to_string(cap));
  // breadth-first by level so each level reuses the previous one's affine data
  struct Node {
    ContractionMap map;
  };
  std::vector<Node> level{{ContractionMap(Mat::Identity(system_.dimension(), system_.dimension()),
                                          Vec::Zero(system_.dimension()))}};
  for (int d = 0; d < depth_; ++d) {
    std::vector<Node> next;
    next.reserve(level.size() * static_cast<std::size_t>(n));
    for (const auto& node : level)
      for (int i = 1; i <= n; ++i) next.push_back(Node{node.map.compose(system_.map(i))});
    level = std::move(next);
  }
  WordTable table(n, depth_);
  cells_.reserve(level.size());
  for (std::uint64_t k = 0; k < level.size(); ++k) {
    const auto& m = level[k].map;
    cells_.push_back(Cell{table.word_at(k), m.apply(system_.hull().center),
                          m.upper_bound() * system_.hull().radius});
  }
  return cells_;
}

namespace {

// Depth-first descent over the virtual cell tree, pruning branches whose
// enclosing ball already excludes the query point. Children append symbols
// (K_{w i} inside K_w), so pruning by the parent ball is sound. The radius
// uses the product bound, certified though slightly looser than the per-word
// singular value.
bool contains_descend(const IfsSystem& system, const Vec& p, const ContractionMap& acc,
                      double radius, int depth, double tol) {
  if ((p - acc.apply(system.hull().center)).norm() > radius + tol) return false;
  if (depth == 0) return true;
  for (int i = 1; i <= system.map_count(); ++i) {
    const auto& m = system.map(i);
    if (contains_descend(system, p, acc.compose(m), radius * m.upper_bound(), depth - 1, tol))
      return true;
  }
  return false;
}

double distance_descend(const IfsSystem& system, const Vec& p, const ContractionMap& acc,
                        double radius, int depth, double best) {
  double gap = (p - acc.apply(system.hull().center)).norm() - radius;
  if (gap >= best) return best;
  if (depth == 0) return std::max(0.0, gap);
  for (int i = 1; i <= system.map_count(); ++i) {
    const auto& m = system.map(i);
    best = distance_descend(system, p, acc.compose(m), radius * m.upper_bound(), depth - 1, best);
    if (best == 0.0) break;
  }
  return best;
}

ContractionMap identity_map(int dim) {
  return ContractionMap(Mat::Identity(dim, dim), Vec::Zero(dim));
}

}  // namespace

bool CellTree::contains(const Vec& point, double tol) const {
  return contains_at_depth(point, depth_, tol);
}

bool CellTree::contains_at_depth(const Vec& point, int depth, double tol) const {
  if (point.size() != system_.dimension()) throw InvalidInputError("point dimension mismatch");
  return contains_descend(system_, point, identity_map(system_.dimension()),
                          system_.hull().radius, depth, tol);
}

double CellTree::distance(const Vec& point) const {
  return distance_descend(system_, point, identity_map(system_.dimension()),
                          system_.hull().radius, depth_,
                          std::numeric_limits<double>::infinity());
}

CellTree attractor_cells(const IfsSystem& system, int depth) {
  CellTree tree(system, depth);
  tree.cells();  // materialize eagerly; throws on cap violation
  return tree;
}

// ---------------------------------------------------------------------------
// Coding map

CodedPoint coding_point(const IfsSystem& system, const Word& prefix) {
  if (prefix.empty()) throw InvalidInputError("coding prefix must be nonempty");
  Vec p = apply_word(system, prefix, system.base_point());
  double bound = std::pow(system.max_upper_bound(), static_cast<double>(prefix.length())) *
                 2.0 * system.hull().radius;
  return CodedPoint{p, bound};
}

double semiconjugacy_residual(const IfsSystem& system, int symbol, const Word& prefix) {
  Word extended = Word({symbol}).concat(prefix);
  Vec lhs = coding_point(system, extended).point;
  Vec rhs = system.map(symbol).apply(coding_point(system, prefix).point);
  return (lhs - rhs).norm();
}

std::vector<Vec> chaos_game(const IfsSystem& system, std::uint64_t seed,
                            std::uint64_t iterations, std::uint64_t burn_in) {
  if (iterations <= burn_in)
    throw InvalidInputError("chaos game needs iterations > burn_in");
  Rng rng(seed);
  Vec x = system.base_point();
  std::vector<Vec> out;
  out.reserve(iterations - burn_in);
  for (std::uint64_t k = 0; k < iterations; ++k) {
    int i = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(system.map_count()));
    x = system.map(i).apply(x);
    if (k >= burn_in) out.push_back(x);
  }
  return out;
}

}  // namespace selfsim
