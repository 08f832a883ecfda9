#include "selfsim/cograph.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <queue>

#include "selfsim/errors.hpp"

namespace selfsim {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Undetermined: return "undetermined";
  }
  return "?";
}

namespace {

using Interval = std::pair<double, double>;

std::vector<Interval> merge_intervals(std::vector<Interval> in) {
  if (in.empty()) return in;
  std::sort(in.begin(), in.end());
  std::vector<Interval> out{in.front()};
  for (std::size_t k = 1; k < in.size(); ++k) {
    if (in[k].first <= out.back().second + 1e-12)
      out.back().second = std::max(out.back().second, in[k].second);
    else
      out.push_back(in[k]);
  }
  return out;
}

// Parameter intervals where the line anchor + t*dir pierces depth-level cell
// balls. Descends the virtual tree, pruning subtrees the line misses.
void line_cell_intervals(const IfsSystem& system, const Vec& anchor, const Vec& dir,
                         const ContractionMap& acc, double radius, int depth, double tol,
                         std::vector<Interval>& out) {
  Vec center = acc.apply(system.hull().center);
  Vec rel = center - anchor;
  double t0 = rel.dot(dir);
  double d2 = rel.squaredNorm() - t0 * t0;
  double r = radius + tol;
  if (d2 > r * r) return;
  if (depth == 0) {
    double half = std::sqrt(std::max(0.0, r * r - d2));
    out.emplace_back(t0 - half, t0 + half);
    return;
  }
  for (int i = 1; i <= system.map_count(); ++i) {
    const auto& m = system.map(i);
    line_cell_intervals(system, anchor, dir, acc.compose(m), radius * m.upper_bound(),
                        depth - 1, tol, out);
  }
}

double coincidence_scale(const IfsSystem& system) {
  return 1.0 + system.hull().center.cwiseAbs().maxCoeff() + system.hull().radius;
}

}  // namespace

PairSolution branch_solve(const IfsSystem& system, int i, int j, const CellTree& tree,
                          double tol) {
  if (i == j) throw InvalidInputError("branch_solve needs two distinct symbols");
  const auto& mi = system.map(i);
  const auto& mj = system.map(j);
  const int d = system.dimension();

  PairSolution sol;
  sol.i = i;
  sol.j = j;

  Mat a = mi.matrix - mj.matrix;
  Vec rhs = mj.offset - mi.offset;
  Eigen::FullPivLU<Mat> lu(a);
  lu.setThreshold(1e-10);

  if (lu.rank() == d) {
    Vec y = lu.solve(rhs);
    sol.kind = PairSolution::Kind::Points;
    if (tree.contains(y, tol)) sol.points.push_back(y);
    return sol;
  }

  Vec particular = lu.solve(rhs);
  double residual = (a * particular - rhs).norm();
  if (residual > 1e-9 * coincidence_scale(system)) {
    sol.kind = PairSolution::Kind::Empty;
    return sol;
  }

  sol.kind = PairSolution::Kind::Affine;
  sol.anchor = particular;
  Mat kernel = lu.kernel();
  for (int c = 0; c < kernel.cols(); ++c) kernel.col(c).normalize();
  sol.basis = kernel;

  if (kernel.cols() == 1) {
    std::vector<Interval> raw;
    line_cell_intervals(system, sol.anchor, kernel.col(0),
                        ContractionMap(Mat::Identity(d, d), Vec::Zero(d)),
                        system.hull().radius, tree.depth(), tol, raw);
    sol.param_intervals = merge_intervals(std::move(raw));
  } else {
    // full-dimensional solution set (identical maps); report the hull chord
    sol.param_intervals.emplace_back(-system.hull().radius, system.hull().radius);
  }
  return sol;
}

std::vector<BranchPointRecord> branch_index(const IfsSystem& system, const Vec& y,
                                            const CellTree& tree, double tol) {
  (void)tree;
  (void)tol;  // grouping is exact for affine maps; tol only gates membership upstream
  if (y.size() != system.dimension()) throw InvalidInputError("point dimension mismatch");
  double eps = 1e-12 * coincidence_scale(system);
  std::vector<BranchPointRecord> groups;
  for (int i = 1; i <= system.map_count(); ++i) {
    Vec x = system.map(i).apply(y);
    bool placed = false;
    for (auto& g : groups) {
      if ((g.x - x).norm() <= eps) {
        g.indices.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back(BranchPointRecord{x, y, {i}});
  }
  return groups;
}

BranchReport branch_scan(const IfsSystem& system, int depth, double tol) {
  BranchReport report;
  report.depth = depth;
  report.tol = tol;
  CellTree tree(system, depth);

  bool any_segment = false;
  for (int i = 1; i <= system.map_count(); ++i) {
    for (int j = i + 1; j <= system.map_count(); ++j) {
      PairSolution sol = branch_solve(system, i, j, tree, tol);
      if (sol.kind == PairSolution::Kind::Affine && !sol.param_intervals.empty()) {
        if (sol.subspace_dim() >= 1) any_segment = true;
        BranchSegment seg;
        seg.i = i;
        seg.j = j;
        seg.anchor = system.map(i).apply(sol.anchor);
        seg.direction = system.map(i).matrix * sol.basis.col(0);
        seg.intervals = sol.param_intervals;
        report.segments.push_back(std::move(seg));
      }
      for (const Vec& y : sol.points) {
        // regroup through all symbols so shared branch points are not
        // double counted across pairs
        for (auto& g : branch_index(system, y, tree, tol)) {
          if (g.index() < 2) continue;
          bool dup = false;
          for (const auto& have : report.points)
            if ((have.x - g.x).norm() <= 1e-9 * coincidence_scale(system) &&
                (have.y - g.y).norm() <= 1e-9 * coincidence_scale(system))
              dup = true;
          if (!dup) report.points.push_back(std::move(g));
        }
      }
      report.pairs.push_back(std::move(sol));
    }
  }

  if (any_segment) {
    report.cardinality = BranchCardinality::InfiniteAtResolution;
    report.finite_count = 0;
  } else if (!report.points.empty()) {
    report.cardinality = BranchCardinality::Finite;
    // count distinct x values
    std::vector<Vec> xs;
    for (const auto& p : report.points) {
      bool dup = false;
      for (const auto& x : xs)
        if ((x - p.x).norm() <= 1e-9 * coincidence_scale(system)) dup = true;
      if (!dup) xs.push_back(p.x);
    }
    report.finite_count = xs.size();
  } else {
    report.cardinality = BranchCardinality::Empty;
  }
  return report;
}

IndexSet index_set(const IfsSystem& system, const Vec& x, const CellTree& tree, double tol) {
  IndexSet out;
  for (int i = 1; i <= system.map_count(); ++i) {
    const auto& m = system.map(i);
    Eigen::FullPivLU<Mat> lu(m.matrix);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) {
      out.undetermined.push_back(i);
      continue;
    }
    Vec y = lu.solve(x - m.offset);
    if (tree.contains(y, tol)) out.members.push_back(i);
  }
  return out;
}

SeparationVerdict check_graph_separation(const IfsSystem& system, int depth, double tol) {
  BranchReport report = branch_scan(system, depth, tol);
  SeparationVerdict verdict;
  verdict.depth = depth;
  if (report.empty()) {
    verdict.verdict = Verdict::Holds;
    verdict.detail = "branch scan empty at depth " + std::to_string(depth);
    return verdict;
  }
  verdict.verdict = Verdict::Fails;
  if (!report.points.empty()) {
    verdict.witness = report.points.front().x;
  } else if (!report.segments.empty()) {
    const auto& seg = report.segments.front();
    double t = 0.5 * (seg.intervals.front().first + seg.intervals.front().second);
    verdict.witness = Vec(seg.anchor + t * seg.direction);
  }
  verdict.detail = "branch set nonempty";
  return verdict;
}

SeparationVerdict check_strong_separation(const IfsSystem& system, int max_depth, double tol,
                                          std::uint64_t pair_budget) {
  struct Node {
    ContractionMap map;
    double radius;
    int depth;
  };
  struct Entry {
    double gap;
    Node a, b;
    bool operator>(const Entry& o) const { return gap > o.gap; }
  };

  const auto& hull = system.hull();
  SeparationVerdict overall;
  overall.verdict = Verdict::Holds;
  overall.depth = max_depth;
  overall.gap = std::numeric_limits<double>::infinity();

  auto gap_of = [&](const Node& x, const Node& y) {
    return (x.map.apply(hull.center) - y.map.apply(hull.center)).norm() - x.radius - y.radius;
  };
  auto expand_a_side = [&](const Entry& e) {
    if (e.a.depth >= max_depth) return false;
    if (e.b.depth >= max_depth) return true;
    return e.a.depth < e.b.depth || (e.a.depth == e.b.depth && e.a.radius >= e.b.radius);
  };
  auto children_of = [&](const Entry& e) {
    std::vector<Entry> out;
    bool on_a = expand_a_side(e);
    const Node& fixed = on_a ? e.b : e.a;
    const Node& split = on_a ? e.a : e.b;
    for (int s = 1; s <= system.map_count(); ++s) {
      const auto& m = system.map(s);
      Node child{split.map.compose(m), split.radius * m.upper_bound(), split.depth + 1};
      Entry next{0.0, on_a ? child : fixed, on_a ? fixed : child};
      next.gap = gap_of(next.a, next.b);
      out.push_back(std::move(next));
    }
    return out;
  };
  auto fail_with = [&](const Entry& e, int i, int j) {
    Vec ca = e.a.map.apply(hull.center);
    Vec cb = e.b.map.apply(hull.center);
    double denom = e.a.radius + e.b.radius;
    overall.verdict = Verdict::Fails;
    overall.witness = denom > 0.0 ? Vec(ca + (cb - ca) * (e.a.radius / denom)) : ca;
    overall.gap = e.gap;
    overall.detail = "images of maps " + std::to_string(i) + " and " + std::to_string(j) +
                     " overlap at depth " + std::to_string(max_depth);
  };

  for (int i = 1; i <= system.map_count() && overall.verdict != Verdict::Fails; ++i) {
    for (int j = i + 1; j <= system.map_count(); ++j) {
      Node a{system.map(i), system.map(i).upper_bound() * hull.radius, 1};
      Node b{system.map(j), system.map(j).upper_bound() * hull.radius, 1};
      Entry root{gap_of(a, b), a, b};

      // Greedy descent: follow the most overlapping child pair. If a chain
      // of overlapping cells survives to the resolution limit, that is a
      // failure witness; a dead end falls back to branch and bound.
      bool greedy_failed_pair = false;
      {
        Entry cur = root;
        while (cur.gap <= 0.0) {
          if (cur.a.depth >= max_depth && cur.b.depth >= max_depth) {
            fail_with(cur, i, j);
            greedy_failed_pair = true;
            break;
          }
          auto kids = children_of(cur);
          cur = *std::min_element(kids.begin(), kids.end(),
                                  [](const Entry& x, const Entry& y) { return x.gap < y.gap; });
        }
      }
      if (greedy_failed_pair) break;

      // Branch and bound: pop the smallest gap; a positive minimum certifies
      // the pair disjoint with that gap as a distance lower bound.
      std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
      queue.push(root);
      std::uint64_t work = 0;
      bool decided = false;
      while (!queue.empty()) {
        if (++work > pair_budget) break;
        Entry e = queue.top();
        queue.pop();
        if (e.gap > 0.0) {
          overall.gap = std::min(overall.gap, e.gap);
          decided = true;
          break;
        }
        if (e.a.depth >= max_depth && e.b.depth >= max_depth) {
          fail_with(e, i, j);
          decided = true;
          break;
        }
        for (auto& next : children_of(e)) queue.push(std::move(next));
      }
      if (!decided && overall.verdict == Verdict::Holds) {
        overall.verdict = Verdict::Undetermined;
        overall.gap = queue.empty() ? 0.0 : queue.top().gap;
        overall.detail = "pair budget exhausted for maps " + std::to_string(i) + "," +
                         std::to_string(j) + "; tightest gap " + std::to_string(overall.gap);
      }
      if (overall.verdict == Verdict::Fails) break;
    }
  }
  (void)tol;
  if (overall.verdict == Verdict::Holds && !std::isfinite(overall.gap)) overall.gap = 0.0;
  return overall;
}

OscVerdict check_open_set_condition(const IfsSystem& system, const Region& witness, int depth,
                                    int samples) {
  (void)samples;
  OscVerdict out;
  Region v = witness;
  if (v.kind == Region::Kind::HullInterior)
    v = Region::ball(system.hull().center, system.hull().radius);
  if (v.dimension() != system.dimension()) {
    out.verdict = Verdict::Undetermined;
    out.detail = "witness region dimension does not match the system";
    return out;
  }

  // certify V meets the attractor: find a cell ball strictly inside V
  {
    double margin = 1e-9 * (1.0 + system.hull().radius);
    bool found = false;
    struct Node {
      ContractionMap map;
      double radius;
      int depth;
    };
    std::vector<Node> frontier{
        Node{ContractionMap(Mat::Identity(system.dimension(), system.dimension()),
                            Vec::Zero(system.dimension())),
             system.hull().radius, 0}};
    for (int level = 0; level <= depth && !found; ++level) {
      std::vector<Node> next;
      for (const auto& node : frontier) {
        try {
          if (region_contains(v, Region::ball(node.map.apply(system.hull().center),
                                              node.radius + margin))) {
            found = true;
            break;
          }
        } catch (const InvalidInputError&) {
        }
        if (node.depth < depth) {
          for (int s = 1; s <= system.map_count(); ++s) {
            const auto& m = system.map(s);
            next.push_back(Node{node.map.compose(m), node.radius * m.upper_bound(),
                                node.depth + 1});
          }
        }
      }
      frontier = std::move(next);
    }
    if (!found) {
      out.verdict = Verdict::Undetermined;
      out.detail = "could not certify that the witness region meets the attractor";
      return out;
    }
  }

  std::vector<Region> images;
  images.reserve(static_cast<std::size_t>(system.map_count()));
  for (int i = 1; i <= system.map_count(); ++i) {
    try {
      images.push_back(map_region(system.map(i), v));
    } catch (const InvalidInputError& err) {
      out.verdict = Verdict::Undetermined;
      out.detail = std::string("cannot map witness exactly: ") + err.what();
      return out;
    }
  }

  for (int i = 1; i <= system.map_count(); ++i) {
    bool contained = false;
    try {
      contained = region_contains(v, images[static_cast<std::size_t>(i - 1)]);
    } catch (const InvalidInputError& err) {
      out.verdict = Verdict::Undetermined;
      out.detail = std::string("containment test unsupported: ") + err.what();
      return out;
    }
    if (!contained) {
      for (const Vec& p : region_probe_points(images[static_cast<std::size_t>(i - 1)])) {
        if (!region_contains_point(v, p, 0.0)) {
          out.verdict = Verdict::Fails;
          out.witness = p;
          out.detail = "image of map " + std::to_string(i) + " leaves the witness region";
          return out;
        }
      }
      out.verdict = Verdict::Undetermined;
      out.detail = "containment of image " + std::to_string(i) +
                   " could not be certified or refuted";
      return out;
    }
  }

  for (int i = 1; i <= system.map_count(); ++i) {
    for (int j = i + 1; j <= system.map_count(); ++j) {
      bool disjoint = false;
      try {
        disjoint = regions_disjoint(images[static_cast<std::size_t>(i - 1)],
                                    images[static_cast<std::size_t>(j - 1)]);
      } catch (const InvalidInputError& err) {
        out.verdict = Verdict::Undetermined;
        out.detail = std::string("disjointness test unsupported: ") + err.what();
        return out;
      }
      if (!disjoint) {
        auto w = overlap_witness(images[static_cast<std::size_t>(i - 1)],
                                 images[static_cast<std::size_t>(j - 1)]);
        out.verdict = Verdict::Fails;
        if (w) out.witness = *w;
        out.detail = "images of maps " + std::to_string(i) + " and " + std::to_string(j) +
                     " overlap inside the witness region";
        return out;
      }
    }
  }

  out.verdict = Verdict::Holds;
  out.detail = "witness region verified";
  return out;
}

SeparationReport check_separations(const IfsSystem& system, int depth, double tol,
                                   const std::optional<Region>& osc_witness) {
  SeparationReport report;
  report.depth = depth;
  report.tol = tol;
  report.strong = check_strong_separation(system, depth, tol);
  report.graph = check_graph_separation(system, depth, tol);
  if (osc_witness) {
    report.open_set = check_open_set_condition(system, *osc_witness);
    report.witness_region = osc_witness;
  } else {
    report.open_set.verdict = Verdict::Undetermined;
    report.open_set.detail = "no witness region provided; no automated search is performed";
  }
  return report;
}

// ---------------------------------------------------------------------------
// CographSample / PathSample

CographSample::CographSample(GridPtr grid, double merge_tol) : grid_(std::move(grid)) {
  const auto& system = grid_->system();
  const int n = system.map_count();
  const std::uint64_t g = grid_->size();
  double eps = merge_tol * coincidence_scale(system);
  reps_.assign(static_cast<std::size_t>(n) * g, 0);
  std::vector<Vec> images(static_cast<std::size_t>(n));
  for (std::uint64_t u = 0; u < g; ++u) {
    for (int i = 1; i <= n; ++i)
      images[static_cast<std::size_t>(i - 1)] = system.map(i).apply(grid_->point(u));
    bool merged_here = false;
    for (int i = 1; i <= n; ++i) {
      int rep = i;
      for (int j = 1; j < i; ++j) {
        if ((images[static_cast<std::size_t>(j - 1)] - images[static_cast<std::size_t>(i - 1)])
                .norm() <= eps) {
          rep = j;
          break;
        }
      }
      reps_[static_cast<std::size_t>(i - 1) * g + u] = rep;
      if (rep != i) merged_here = true;
    }
    if (merged_here) {
      merged_points_.push_back(u);
      has_merges_ = true;
    }
  }
}

CographSamplePtr make_cograph_sample(GridPtr grid, double merge_tol) {
  return std::make_shared<CographSample>(std::move(grid), merge_tol);
}

PathSample build_path_sample(GridPtr grid, int path_depth, std::uint64_t cap) {
  if (path_depth < 0) throw InvalidInputError("path depth must be nonnegative");
  const auto& system = grid->system();
  WordTable table(system.map_count(), path_depth);
  std::uint64_t keys = table.size() * grid->size();
  std::uint64_t coords = keys * static_cast<std::uint64_t>(path_depth + 1);
  if (coords > cap)
    throw ResourceLimitError("path sample needs " + std::to_string(coords) +
                             " coordinates, cap is " + std::to_string(cap));
  PathSample out;
  out.grid = grid;
  out.path_depth = path_depth;
  out.coords.resize(coords);
  for (std::uint64_t w = 0; w < table.size(); ++w) {
    Word word = table.word_at(w);
    for (std::uint64_t u = 0; u < grid->size(); ++u) {
      std::uint64_t key = w * grid->size() + u;
      Vec p = grid->point(u);
      out.coords[key * static_cast<std::uint64_t>(path_depth + 1) +
                 static_cast<std::uint64_t>(path_depth)] = p;
      for (int k = path_depth - 1; k >= 0; --k) {
        p = system.map(word.symbols[static_cast<std::size_t>(k)]).apply(p);
        out.coords[key * static_cast<std::uint64_t>(path_depth + 1) +
                   static_cast<std::uint64_t>(k)] = p;
      }
    }
  }
  return out;
}

}  // namespace selfsim
