#include "selfsim/registry.hpp"

#include <chrono>
#include <cmath>

#include "selfsim/errors.hpp"

namespace selfsim {

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

Mat m1(double a) {
  Mat m(1, 1);
  m << a;
  return m;
}

Mat m2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

ContractionMap affine1(double a, double t) { return ContractionMap(m1(a), v1(t)); }

ContractionMap affine2(double a, double b, double c, double d, double tx, double ty) {
  return ContractionMap(m2(a, b, c, d), v2(tx, ty));
}

Region unit_interval() { return Region::box(v1(0.0), v1(1.0)); }

std::vector<RegistryEntry> build_registry() {
  const double s3 = std::sqrt(3.0);
  std::vector<RegistryEntry> entries;

  {
    RegistryEntry e{.name = "cantor",
                    .description = "middle-thirds Cantor set",
                    .system = IfsSystem(1, {affine1(1.0 / 3.0, 0.0), affine1(1.0 / 3.0, 2.0 / 3.0)},
                                        HullBall{v1(0.5), 0.5}, "cantor")};
    e.osc_witness = unit_interval();
    e.grid_depth = 13;
    e.expect_strong = Verdict::Holds;
    e.expect_graph = Verdict::Holds;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::CuntzAlgebra;
    e.expect_cuntz_n = 2;
    e.expect_branch = ExpectedBranch::Empty;
    e.metadata = {{"algebra", "O_2"}};
    entries.push_back(std::move(e));
  }

  {
    RegistryEntry e{.name = "full-shift-3",
                    .description = "geometric model of the full 3-shift: three affine copies "
                                   "with ratio 1/5 and gaps",
                    .system = IfsSystem(1,
                                        {affine1(0.2, 0.0), affine1(0.2, 0.4), affine1(0.2, 0.8)},
                                        HullBall{v1(0.5), 0.5}, "full-shift-3")};
    e.osc_witness = unit_interval();
    e.grid_depth = 8;
    e.expect_strong = Verdict::Holds;
    e.expect_graph = Verdict::Holds;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::CuntzAlgebra;
    e.expect_cuntz_n = 3;
    e.expect_branch = ExpectedBranch::Empty;
    e.metadata = {{"algebra", "O_3"},
                  {"note", "sequence-space shift modeled by a strongly separated affine system"}};
    entries.push_back(std::move(e));
  }

  {
    RegistryEntry e{.name = "tent",
                    .description = "branches of the inverse of the tent map on [0,1]",
                    .system = IfsSystem(1, {affine1(0.5, 0.0), affine1(-0.5, 1.0)},
                                        HullBall{v1(0.5), 0.5}, "tent")};
    e.osc_witness = unit_interval();
    e.grid_depth = 13;
    e.expect_strong = Verdict::Fails;
    e.expect_graph = Verdict::Fails;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::NotGraphSeparated;
    e.expect_branch = ExpectedBranch::Finite;
    e.expect_branch_count = 1;
    e.metadata = {{"algebra", "O_{z^2-2}"},
                  {"k_data", "(K0, K1, [1]) matches O_infinity"}};
    entries.push_back(std::move(e));
  }

  {
    RegistryEntry e{.name = "tent-modified",
                    .description = "two increasing affine halves of [0,1]",
                    .system = IfsSystem(1, {affine1(0.5, 0.0), affine1(0.5, 0.5)},
                                        HullBall{v1(0.5), 0.5}, "tent-modified")};
    e.osc_witness = unit_interval();
    e.grid_depth = 13;
    e.expect_strong = Verdict::Fails;
    e.expect_graph = Verdict::Holds;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::CuntzAlgebra;
    e.expect_cuntz_n = 2;
    e.expect_branch = ExpectedBranch::Empty;
    e.metadata = {{"algebra", "O_2"}};
    entries.push_back(std::move(e));
  }

  // Koch: gamma_1(z) = w conj(z), gamma_2(z) = (1-w)(conj(z)-1)+1 with
  // w = 1/2 + i sqrt(3)/6; conj makes the linear parts reflections.
  {
    RegistryEntry e{
        .name = "koch",
        .description = "Koch curve from two conjugate-similarities of ratio 1/sqrt(3)",
        .system = IfsSystem(2,
                            {affine2(0.5, s3 / 6.0, s3 / 6.0, -0.5, 0.0, 0.0),
                             affine2(0.5, -s3 / 6.0, -s3 / 6.0, -0.5, 0.5, s3 / 6.0)},
                            HullBall{v2(0.5, s3 / 18.0), 0.55}, "koch")};
    e.osc_witness = Region::polygon({v2(0.0, 0.0), v2(1.0, 0.0), v2(0.5, s3 / 6.0)});
    e.grid_depth = 13;
    e.expect_strong = Verdict::Fails;
    e.expect_graph = Verdict::Holds;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::CuntzAlgebra;
    e.expect_cuntz_n = 2;
    e.expect_branch = ExpectedBranch::Empty;
    e.metadata = {{"algebra", "O_2"}};
    entries.push_back(std::move(e));
  }

  // Koch modified: the second branch is turned over so both maps become
  // inverse branches of one map on the curve; gamma_2~(z) = (w-1) z + 1.
  {
    RegistryEntry e{
        .name = "koch-modified",
        .description = "Koch curve with the second branch turned over",
        .system = IfsSystem(2,
                            {affine2(0.5, s3 / 6.0, s3 / 6.0, -0.5, 0.0, 0.0),
                             affine2(-0.5, -s3 / 6.0, s3 / 6.0, -0.5, 1.0, 0.0)},
                            HullBall{v2(0.5, s3 / 18.0), 0.55}, "koch-modified")};
    e.osc_witness = Region::polygon({v2(0.0, 0.0), v2(1.0, 0.0), v2(0.5, s3 / 6.0)});
    e.grid_depth = 13;
    e.expect_strong = Verdict::Fails;
    e.expect_graph = Verdict::Fails;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::NotGraphSeparated;
    e.expect_branch = ExpectedBranch::NonEmpty;
    e.metadata = {{"algebra", "O_{T_{2^n}}([0,1]) for the length-n word systems"},
                  {"k_data", "K0 = Z^(2^n - 1), K1 = 0 for the length-n word systems"}};
    entries.push_back(std::move(e));
  }

  {
    RegistryEntry e{
        .name = "gasket",
        .description = "Sierpinski gasket from three half-scale translations",
        .system = IfsSystem(2,
                            {affine2(0.5, 0.0, 0.0, 0.5, 0.25, s3 / 4.0),
                             affine2(0.5, 0.0, 0.0, 0.5, 0.0, 0.0),
                             affine2(0.5, 0.0, 0.0, 0.5, 0.5, 0.0)},
                            HullBall{v2(0.5, s3 / 6.0), 1.0 / s3}, "gasket")};
    e.osc_witness = Region::polygon({v2(0.0, 0.0), v2(1.0, 0.0), v2(0.5, s3 / 2.0)});
    e.grid_depth = 8;
    e.expect_strong = Verdict::Fails;
    e.expect_graph = Verdict::Holds;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::CuntzAlgebra;
    e.expect_cuntz_n = 3;
    e.expect_branch = ExpectedBranch::Empty;
    e.metadata = {{"algebra", "O_3"}};
    entries.push_back(std::move(e));
  }

  // Gasket modified: lower maps composed with +-120 degree rotations about
  // their subtriangle centroids, making the three maps inverse branches of
  // one map on the gasket.
  {
    RegistryEntry e{
        .name = "gasket-modified",
        .description = "Sierpinski gasket with rotated lower branches",
        .system = IfsSystem(2,
                            {affine2(0.5, 0.0, 0.0, 0.5, 0.25, s3 / 4.0),
                             affine2(-0.25, s3 / 4.0, -s3 / 4.0, -0.25, 0.25, s3 / 4.0),
                             affine2(-0.25, -s3 / 4.0, s3 / 4.0, -0.25, 1.0, 0.0)},
                            HullBall{v2(0.5, s3 / 6.0), 1.0 / s3}, "gasket-modified")};
    e.osc_witness = Region::polygon({v2(0.0, 0.0), v2(1.0, 0.0), v2(0.5, s3 / 2.0)});
    e.grid_depth = 9;
    e.expect_strong = Verdict::Fails;
    e.expect_graph = Verdict::Fails;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::NotGraphSeparated;
    e.expect_branch = ExpectedBranch::Finite;
    e.expect_branch_count = 3;
    e.metadata = {{"algebra", "purely infinite simple, not isomorphic to O_3"},
                  {"k_data", "K0 contains a torsion free element"},
                  {"k_data_note",
                   "source wording kept verbatim; a torsion element appears to be intended"}};
    entries.push_back(std::move(e));
  }

  {
    std::vector<ContractionMap> maps;
    const double t = 1.0 / 3.0;
    auto third = [&](double tx, double ty) { return affine2(t, 0.0, 0.0, t, tx, ty); };
    maps = {third(0.0, 0.0),     third(t, 0.0),   third(2.0 * t, 0.0), third(0.0, t),
            third(2.0 * t, t),   third(0.0, 2.0 * t), third(t, 2.0 * t),
            third(2.0 * t, 2.0 * t)};
    RegistryEntry e{.name = "carpet",
                    .description = "Sierpinski carpet from eight third-scale translations",
                    .system = IfsSystem(2, std::move(maps),
                                        HullBall{v2(0.5, 0.5), std::sqrt(2.0) / 2.0}, "carpet")};
    e.osc_witness = Region::box(v2(0.0, 0.0), v2(1.0, 1.0));
    e.grid_depth = 4;
    e.expect_strong = Verdict::Fails;
    e.expect_graph = Verdict::Holds;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::CuntzAlgebra;
    e.expect_cuntz_n = 8;
    e.expect_branch = ExpectedBranch::Empty;
    e.metadata = {{"algebra", "O_8"}};
    entries.push_back(std::move(e));
  }

  // Carpet modified: four of the eight maps reflected so the family becomes
  // inverse branches of one map; the branch set is an explicit union of
  // twelve-ths of the unit square's grid lines.
  {
    const double t = 1.0 / 3.0;
    std::vector<ContractionMap> maps = {
        affine2(t, 0.0, 0.0, t, 0.0, 0.0),           // 1
        affine2(-t, 0.0, 0.0, t, 2.0 * t, 0.0),      // 2 reflected in x
        affine2(t, 0.0, 0.0, t, 2.0 * t, 0.0),       // 3
        affine2(t, 0.0, 0.0, -t, 0.0, 2.0 * t),      // 4 reflected in y
        affine2(t, 0.0, 0.0, -t, 2.0 * t, 2.0 * t),  // 5 reflected in y
        affine2(t, 0.0, 0.0, t, 0.0, 2.0 * t),       // 6
        affine2(-t, 0.0, 0.0, t, 2.0 * t, 2.0 * t),  // 7 reflected in x
        affine2(t, 0.0, 0.0, t, 2.0 * t, 2.0 * t)    // 8
    };
    RegistryEntry e{.name = "carpet-modified",
                    .description = "Sierpinski carpet with reflected interior-edge branches",
                    .system = IfsSystem(2, std::move(maps),
                                        HullBall{v2(0.5, 0.5), std::sqrt(2.0) / 2.0},
                                        "carpet-modified")};
    e.osc_witness = Region::box(v2(0.0, 0.0), v2(1.0, 1.0));
    e.grid_depth = 4;
    e.expect_strong = Verdict::Fails;
    e.expect_graph = Verdict::Fails;
    e.expect_osc = Verdict::Holds;
    e.expect_verdict = AlgebraVerdict::NotGraphSeparated;
    e.expect_branch = ExpectedBranch::InfiniteAtResolution;
    const double a = 1.0 / 3.0, b = 2.0 / 3.0;
    e.golden_branch_segments = {
        {v2(0.0, a), v2(a, a)}, {v2(b, a), v2(1.0, a)},   // y = 1/3
        {v2(0.0, b), v2(a, b)}, {v2(b, b), v2(1.0, b)},   // y = 2/3
        {v2(a, 0.0), v2(a, a)}, {v2(a, b), v2(a, 1.0)},   // x = 1/3
        {v2(b, 0.0), v2(b, a)}, {v2(b, b), v2(b, 1.0)}};  // x = 2/3
    e.metadata = {{"algebra", "purely infinite simple, not isomorphic to O_8"},
                  {"k_data", "K0(C(B)) = Z^4, K1(C(B)) = 0"},
                  {"k_data_2", "K0(C(K)) = Z, K1(C(K)) = Z^infinity; "
                               "K0 of the algebra contains a torsion free element"}};
    entries.push_back(std::move(e));
  }

  return entries;
}

}  // namespace

const std::vector<RegistryEntry>& builtin_registry() {
  static const std::vector<RegistryEntry> registry = build_registry();
  return registry;
}

const RegistryEntry* find_registry_entry(const std::string& name) {
  for (const auto& e : builtin_registry())
    if (e.name == name) return &e;
  return nullptr;
}

namespace {

double point_to_segment(const Vec& p, const Vec& a, const Vec& b) {
  Vec ab = b - a;
  double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

// distance from a point to the detected branch descriptor
double point_to_detected(const BranchReport& report, const Vec& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : report.points) best = std::min(best, (p - rec.x).norm());
  for (const auto& seg : report.segments)
    for (const auto& [t0, t1] : seg.intervals) {
      Vec a = seg.anchor + t0 * seg.direction;
      Vec b = seg.anchor + t1 * seg.direction;
      best = std::min(best, point_to_segment(p, a, b));
    }
  return best;
}

struct GoldenCheck {
  bool pass = true;
  double coverage = 1.0;
  double hausdorff = 0.0;
  std::string detail;
};

GoldenCheck check_golden_segments(const RegistryEntry& entry, const BranchReport& report,
                                  double tol_depth) {
  GoldenCheck out;
  const int samples_per_segment = 200;

  // coverage: sampled golden points must be near the detected set
  std::size_t covered = 0, total = 0;
  for (const auto& [a, b] : entry.golden_branch_segments) {
    for (int k = 0; k < samples_per_segment; ++k) {
      double t = static_cast<double>(k) / (samples_per_segment - 1);
      Vec p = a + t * (b - a);
      ++total;
      if (point_to_detected(report, p) <= tol_depth) ++covered;
    }
  }
  out.coverage = total ? static_cast<double>(covered) / static_cast<double>(total) : 1.0;

  // Hausdorff direction two: sampled detected set must be near the golden set
  auto point_to_golden = [&](const Vec& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : entry.golden_branch_segments)
      best = std::min(best, point_to_segment(p, a, b));
    return best;
  };
  double worst = 0.0;
  for (const auto& rec : report.points) worst = std::max(worst, point_to_golden(rec.x));
  for (const auto& seg : report.segments)
    for (const auto& [t0, t1] : seg.intervals)
      for (int k = 0; k < samples_per_segment; ++k) {
        double t = t0 + (t1 - t0) * static_cast<double>(k) / (samples_per_segment - 1);
        worst = std::max(worst, point_to_golden(Vec(seg.anchor + t * seg.direction)));
      }
  out.hausdorff = worst;

  if (out.coverage < 0.99) {
    out.pass = false;
    out.detail += "coverage " + std::to_string(out.coverage) + " below 0.99; ";
  }
  if (out.hausdorff > tol_depth) {
    out.pass = false;
    out.detail += "detected set strays " + std::to_string(out.hausdorff) +
                  " from the stated set (allowed " + std::to_string(tol_depth) + "); ";
  }
  return out;
}

}  // namespace

RegistryVerifyResult registry_verify(int depth, double tol) {
  RegistryVerifyResult result;
  result.depth = depth;
  result.tol = tol;
  result.pass = true;
  auto t_start = std::chrono::steady_clock::now();

  for (const auto& entry : builtin_registry()) {
    auto t0 = std::chrono::steady_clock::now();
    RegistryRow row;
    row.name = entry.name;
    row.report = classify(entry.system, depth, tol, entry.osc_witness);
    row.pass = true;

    auto expect = [&](bool ok, const std::string& what) {
      if (!ok) {
        row.pass = false;
        row.deltas += what + "; ";
      }
    };
    expect(row.report.separation.strong.verdict == entry.expect_strong,
           "strong separation expected " + std::string(verdict_name(entry.expect_strong)) +
               ", got " + verdict_name(row.report.separation.strong.verdict));
    expect(row.report.separation.graph.verdict == entry.expect_graph,
           "graph separation expected " + std::string(verdict_name(entry.expect_graph)) +
               ", got " + verdict_name(row.report.separation.graph.verdict));
    expect(row.report.separation.open_set.verdict == entry.expect_osc,
           "open set condition expected " + std::string(verdict_name(entry.expect_osc)) +
               ", got " + verdict_name(row.report.separation.open_set.verdict));
    expect(row.report.verdict == entry.expect_verdict, "verdict mismatch");
    if (entry.expect_verdict == AlgebraVerdict::CuntzAlgebra)
      expect(row.report.cuntz_n == entry.expect_cuntz_n,
             "Cuntz index expected " + std::to_string(entry.expect_cuntz_n));

    switch (entry.expect_branch) {
      case ExpectedBranch::Empty:
        expect(row.report.branch.cardinality == BranchCardinality::Empty, "branch set not empty");
        break;
      case ExpectedBranch::Finite:
        expect(row.report.branch.cardinality == BranchCardinality::Finite &&
                   row.report.branch.finite_count == entry.expect_branch_count,
               "branch set expected finite with " + std::to_string(entry.expect_branch_count) +
                   " points");
        expect(row.report.dim_A_mod_IX == entry.expect_branch_count,
               "dim(A/I_X) disagrees with the branch point count");
        break;
      case ExpectedBranch::InfiniteAtResolution:
        expect(row.report.branch.cardinality == BranchCardinality::InfiniteAtResolution,
               "branch set expected infinite-at-resolution");
        break;
      case ExpectedBranch::NonEmpty:
        expect(!row.report.branch.empty(), "branch set expected nonempty");
        break;
    }

    if (!entry.golden_branch_segments.empty()) {
      double tol_depth =
          2.0 * std::pow(entry.system.max_upper_bound(), depth) * entry.system.hull().radius;
      GoldenCheck golden = check_golden_segments(entry, row.report.branch, tol_depth);
      expect(golden.pass, "stated branch set not reproduced: " + golden.detail);
    }

    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.pass = result.pass && row.pass;
    result.rows.push_back(std::move(row));
  }

  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

}  // namespace selfsim
