#include <doctest.h>

#include <cmath>

#include "selfsim/cograph.hpp"
#include "selfsim/registry.hpp"
#include "selfsim/rng.hpp"

using namespace selfsim;

namespace {

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

const IfsSystem& sys(const char* name) { return find_registry_entry(name)->system; }

}  // namespace

TEST_CASE("branch_solve: inconsistent, isolated and line solutions") {
  // cantor (1,2): equal linear parts with distinct offsets are inconsistent
  CellTree c10(sys("cantor"), 10);
  PairSolution cantor = branch_solve(sys("cantor"), 1, 2, c10);
  CHECK(cantor.kind == PairSolution::Kind::Empty);
  CHECK_FALSE(cantor.nonempty());

  // tent (1,2): y/2 = -y/2 + 1 gives y = 1 inside K, branch point x = 1/2
  CellTree t10(sys("tent"), 10);
  PairSolution tent = branch_solve(sys("tent"), 1, 2, t10);
  REQUIRE(tent.kind == PairSolution::Kind::Points);
  REQUIRE(tent.points.size() == 1);
  CHECK(tent.points[0](0) == doctest::Approx(1.0));

  // carpet-modified (1,4): a full line of solutions along the top edge
  CellTree k8(sys("carpet-modified"), 8);
  PairSolution carpet = branch_solve(sys("carpet-modified"), 1, 4, k8);
  REQUIRE(carpet.kind == PairSolution::Kind::Affine);
  CHECK(carpet.subspace_dim() == 1);
  REQUIRE_FALSE(carpet.param_intervals.empty());
  // solutions are y = (s, 1); image under map 1 is the segment [0,1/3] x {1/3}
  for (double s : {0.0, 0.5, 1.0}) {
    Vec y = v2(s, 1.0);
    Vec diff = y - carpet.anchor;
    double t = diff.dot(carpet.basis.col(0));
    CHECK((carpet.anchor + t * carpet.basis.col(0) - y).norm() <= 1e-9);
  }

  // symmetry: (i, j) and (j, i) describe the same set
  PairSolution rev = branch_solve(sys("tent"), 2, 1, t10);
  REQUIRE(rev.points.size() == 1);
  CHECK((rev.points[0] - tent.points[0]).norm() <= 1e-12);
}

TEST_CASE("branch_scan verdicts per system") {
  BranchReport tent = branch_scan(sys("tent"), 10);
  CHECK(tent.cardinality == BranchCardinality::Finite);
  CHECK(tent.finite_count == 1);
  REQUIRE(tent.points.size() == 1);
  CHECK(tent.points[0].x(0) == doctest::Approx(0.5));
  CHECK(tent.points[0].y(0) == doctest::Approx(1.0));
  CHECK(tent.points[0].index() == 2);

  BranchReport gasket_mod = branch_scan(sys("gasket-modified"), 10);
  CHECK(gasket_mod.cardinality == BranchCardinality::Finite);
  CHECK(gasket_mod.finite_count == 3);
  // the three midpoints of the defining triangle's sides
  const double s3 = std::sqrt(3.0);
  std::vector<Vec> expect{v2(0.25, s3 / 4.0), v2(0.75, s3 / 4.0), v2(0.5, 0.0)};
  for (const auto& e : expect) {
    bool found = false;
    for (const auto& rec : gasket_mod.points)
      if ((rec.x - e).norm() <= 1e-9) found = true;
    CHECK(found);
  }

  CHECK(branch_scan(sys("gasket"), 10).cardinality == BranchCardinality::Empty);
  CHECK(branch_scan(sys("koch"), 10).cardinality == BranchCardinality::Empty);
  CHECK(branch_scan(sys("carpet-modified"), 10).cardinality ==
        BranchCardinality::InfiniteAtResolution);
  CHECK_FALSE(branch_scan(sys("koch-modified"), 10).empty());
}

TEST_CASE("carpet-modified branch segments reproduce the stated set") {
  BranchReport report = branch_scan(sys("carpet-modified"), 10);
  const double a = 1.0 / 3.0, b = 2.0 / 3.0;
  // expected segments from the eight reflected-edge pairs
  std::vector<std::pair<Vec, Vec>> golden = {
      {v2(0.0, a), v2(a, a)}, {v2(b, a), v2(1.0, a)}, {v2(0.0, b), v2(a, b)},
      {v2(b, b), v2(1.0, b)}, {v2(a, 0.0), v2(a, a)}, {v2(a, b), v2(a, 1.0)},
      {v2(b, 0.0), v2(b, a)}, {v2(b, b), v2(b, 1.0)}};
  auto dist_to_detected = [&](const Vec& p) {
    double best = 1e18;
    for (const auto& seg : report.segments)
      for (const auto& [t0, t1] : seg.intervals) {
        Vec s0 = seg.anchor + t0 * seg.direction;
        Vec s1 = seg.anchor + t1 * seg.direction;
        Vec d = s1 - s0;
        double len2 = d.squaredNorm();
        double t = len2 > 0 ? std::clamp((p - s0).dot(d) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, (p - (s0 + t * d)).norm());
      }
    for (const auto& rec : report.points) best = std::min(best, (p - rec.x).norm());
    return best;
  };
  double tol_depth = 2.0 * std::pow(1.0 / 3.0, 10) * std::sqrt(2.0) / 2.0;
  for (const auto& [p0, p1] : golden)
    for (int k = 0; k <= 20; ++k) {
      Vec p = p0 + (static_cast<double>(k) / 20.0) * (p1 - p0);
      CHECK(dist_to_detected(p) <= tol_depth);
    }
}

TEST_CASE("branch_index groups images by exact coincidence") {
  CellTree tree(sys("tent"), 8);
  auto at_one = branch_index(sys("tent"), v1(1.0), tree);
  REQUIRE(at_one.size() == 1);
  CHECK(at_one[0].x(0) == doctest::Approx(0.5));
  CHECK(at_one[0].index() == 2);
  CHECK(at_one[0].indices == std::vector<int>{1, 2});

  auto at_zero = branch_index(sys("tent"), v1(0.0), tree);
  REQUIRE(at_zero.size() == 2);
  CHECK(at_zero[0].index() == 1);
  CHECK(at_zero[1].index() == 1);

  // the branch indices always sum to N
  Rng rng(5);
  for (const char* name : {"cantor", "carpet-modified", "gasket-modified"}) {
    const auto& system = sys(name);
    CellTree t(system, 6);
    for (int rep = 0; rep < 20; ++rep) {
      Vec y(system.dimension());
      for (int d = 0; d < system.dimension(); ++d) y(d) = rng.uniform(0.0, 1.0);
      int total = 0;
      for (const auto& g : branch_index(system, y, t)) total += g.index();
      CHECK(total == system.map_count());
    }
  }
}

TEST_CASE("index_set membership at cell resolution") {
  CellTree cantor10(sys("cantor"), 10);
  CHECK(index_set(sys("cantor"), v1(0.5), cantor10).members.empty());
  // 0.2 is not in the Cantor set: its only inverse-image candidate 0.6 falls
  // in the removed middle third, so the index set is empty at any depth
  CHECK(index_set(sys("cantor"), v1(0.2), cantor10).members.empty());
  CHECK(index_set(sys("cantor"), v1(0.2), CellTree(sys("cantor"), 1)).members.empty());
  // on the tent system 0.2 pulls back to 0.4 under the first branch only
  CellTree tent10(sys("tent"), 10);
  CHECK(index_set(sys("tent"), v1(0.2), tent10).members == std::vector<int>{1});
  CHECK(index_set(sys("tent"), v1(0.5), tent10).members == std::vector<int>{1, 2});
  // valid points keep both symbols on the cantor system
  CHECK(index_set(sys("cantor"), v1(1.0 / 3.0), cantor10).members == std::vector<int>{1});
}

TEST_CASE("graph separation matches the branch scan in both directions") {
  for (const char* name : {"cantor", "tent", "tent-modified", "koch", "koch-modified",
                           "gasket", "gasket-modified", "carpet", "carpet-modified"}) {
    for (int depth : {6, 10}) {
      SeparationVerdict v = check_graph_separation(sys(name), depth);
      BranchReport b = branch_scan(sys(name), depth);
      CHECK((v.verdict == Verdict::Holds) == b.empty());
    }
  }
  SeparationVerdict tent = check_graph_separation(sys("tent"), 10);
  REQUIRE(tent.witness.has_value());
  CHECK((*tent.witness)(0) == doctest::Approx(0.5));
}

TEST_CASE("strong separation: certified gaps and failure witnesses") {
  SeparationVerdict cantor = check_strong_separation(sys("cantor"), 10);
  CHECK(cantor.verdict == Verdict::Holds);
  CHECK(cantor.gap == doctest::Approx(1.0 / 3.0));

  SeparationVerdict shift = check_strong_separation(sys("full-shift-3"), 10);
  CHECK(shift.verdict == Verdict::Holds);
  CHECK(shift.gap == doctest::Approx(0.2));

  SeparationVerdict tentmod = check_strong_separation(sys("tent-modified"), 12);
  CHECK(tentmod.verdict == Verdict::Fails);
  REQUIRE(tentmod.witness.has_value());
  CHECK((*tentmod.witness)(0) == doctest::Approx(0.5).epsilon(1e-3));

  SeparationVerdict gasket = check_strong_separation(sys("gasket"), 12);
  CHECK(gasket.verdict == Verdict::Fails);
  REQUIRE(gasket.witness.has_value());
  // gamma_1(Q) = gamma_2(P): the left edge midpoint
  CHECK((*gasket.witness - v2(0.25, std::sqrt(3.0) / 4.0)).norm() <= 1e-3);

  SeparationVerdict carpet = check_strong_separation(sys("carpet"), 10);
  CHECK(carpet.verdict == Verdict::Fails);
}

TEST_CASE("strong separation implies graph separation on random proper systems") {
  Rng rng(2024);
  int strong_holds_seen = 0;
  for (int rep = 0; rep < 40; ++rep) {
    // random 1-d systems with small ratios; hull invariance by construction
    double r1 = rng.uniform(0.05, 0.3), r2 = rng.uniform(0.05, 0.3);
    double t2 = rng.uniform(0.0, 1.0 - r2);
    Mat m(1, 1);
    std::vector<ContractionMap> maps;
    m << r1;
    maps.emplace_back(m, v1(0.0));
    m << r2;
    maps.emplace_back(m, v1(t2));
    IfsSystem system(1, maps, HullBall{v1(0.5), 0.5}, "random");
    if (!verify_proper(system).pass()) continue;
    SeparationVerdict strong = check_strong_separation(system, 10);
    if (strong.verdict == Verdict::Holds) {
      ++strong_holds_seen;
      CHECK(check_graph_separation(system, 10).verdict == Verdict::Holds);
    }
  }
  CHECK(strong_holds_seen > 0);
}

TEST_CASE("open set condition on registry witnesses and a failing box") {
  for (const char* name : {"cantor", "tent", "tent-modified", "koch", "koch-modified",
                           "gasket", "gasket-modified", "carpet", "carpet-modified"}) {
    const auto* entry = find_registry_entry(name);
    OscVerdict v = check_open_set_condition(entry->system, *entry->osc_witness);
    CHECK(v.verdict == Verdict::Holds);
  }
  // too small a box: the second tent branch escapes
  OscVerdict bad =
      check_open_set_condition(sys("tent"), Region::box(v1(0.0), v1(0.4)));
  CHECK(bad.verdict == Verdict::Fails);
  REQUIRE(bad.witness.has_value());
  CHECK((*bad.witness)(0) >= 0.4);

  // hull interior works for the cantor system
  OscVerdict hull = check_open_set_condition(sys("cantor"), Region::hull_interior());
  CHECK(hull.verdict == Verdict::Holds);
}

TEST_CASE("path samples materialize suffix compositions") {
  auto grid0 = make_grid(sys("tent"), 2);
  PathSample n0 = build_path_sample(grid0, 0);
  CHECK(n0.key_count() == grid0->size());

  PathSample n1 = build_path_sample(grid0, 1);
  CHECK(n1.key_count() == 2 * grid0->size());

  auto grid1 = make_grid(sys("cantor"), 1);
  PathSample n2 = build_path_sample(grid1, 2);
  CHECK(n2.key_count() == 8);
  // key ((1,2), y): first coordinate is gamma_1(gamma_2(y))
  WordTable table(2, 2);
  std::uint64_t w12 = table.index_of(Word({1, 2}));
  for (std::uint64_t u = 0; u < grid1->size(); ++u) {
    std::uint64_t key = w12 * grid1->size() + u;
    Vec expect = apply_word(sys("cantor"), Word({1, 2}), grid1->point(u));
    CHECK((n2.coord(key, 0) - expect).norm() <= 1e-15);
    CHECK((n2.coord(key, 2) - grid1->point(u)).norm() == 0.0);
  }
  CHECK_THROWS_AS(build_path_sample(make_grid(sys("carpet"), 4), 6), ResourceLimitError);
}

TEST_CASE("cograph samples merge exactly at branch preimages") {
  auto tent_sample = make_cograph_sample(make_grid(sys("tent"), 8));
  CHECK(tent_sample->has_merges());
  // the only exact merge happens over y = 1
  const auto& grid = tent_sample->grid();
  for (std::uint64_t u : tent_sample->merged_points())
    CHECK(grid.point(u)(0) == doctest::Approx(1.0));
  CHECK_FALSE(make_cograph_sample(make_grid(sys("cantor"), 8))->has_merges());
  CHECK(make_cograph_sample(make_grid(sys("gasket-modified"), 5))->has_merges());
}
