#include <doctest.h>

#include <cmath>

#include "selfsim/bimodule.hpp"
#include "selfsim/registry.hpp"
#include "selfsim/rng.hpp"

using namespace selfsim;

namespace {

const RegistryEntry& entry(const char* name) { return *find_registry_entry(name); }

CographSamplePtr small_sample(const char* name, int depth) {
  return make_cograph_sample(make_grid(entry(name).system, depth));
}

}  // namespace

TEST_CASE("inner product basics") {
  auto sample = small_sample("tent", 9);
  int n = sample->symbol_count();

  CographFunction one = CographFunction::constant(sample, 1.0);
  SampledFunction ip = inner_product(one, one);
  for (std::uint64_t u = 0; u < ip.size(); ++u)
    CHECK(ip.at(u) == Complex(static_cast<double>(n), 0.0));

  CographFunction zero = CographFunction::constant(sample, 0.0);
  CHECK(inner_product(zero, one).sup_norm() == 0.0);

  // f(x, y) = x on the tent cograph: (f|f)(y) = (y/2)^2 + (1 - y/2)^2
  CographFunction coord = CographFunction::from_function(
      sample, [](const Vec& x, const Vec&) { return Complex(x(0), 0.0); });
  SampledFunction ff = inner_product(coord, coord);
  const auto& grid = sample->grid();
  for (std::uint64_t u = 0; u < grid.size(); ++u) {
    double y = grid.point(u)(0);
    double expect = 0.25 * y * y + (1.0 - 0.5 * y) * (1.0 - 0.5 * y);
    CHECK(ff.at(u).real() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("left action keeps branch consistency and witnesses faithfulness") {
  auto sample = small_sample("tent", 9);
  auto grid = sample->grid_ptr();

  CographFunction one = CographFunction::constant(sample, 1.0);
  SampledFunction id_a = SampledFunction::constant(grid, 1.0);
  CographFunction same = left_action(id_a, one);
  CHECK((same - one).sup_norm() == 0.0);

  // a(x) = x acting on the constant: value gamma_i(y) at key (i, y)
  SampledFunction coord = SampledFunction::from_function(
      grid, [](const Vec& x) { return Complex(x(0), 0.0); });
  CographFunction acted = left_action(coord, one);
  const auto& system = grid->system();
  for (std::uint64_t u = 0; u < grid->size(); ++u)
    for (int i = 1; i <= system.map_count(); ++i) {
      double expect = system.map(i).apply(grid->point(u))(0);
      CHECK(std::abs(acted.at(i, u) - Complex(expect, 0.0)) <= grid->tol());
    }
  CHECK(acted.branch_violation() == 0.0);

  // faithfulness witness: a bump at an interior point acts nontrivially
  SampledFunction bump = SampledFunction::from_function(grid, [](const Vec& x) {
    return Complex(std::max(0.0, 1.0 - 8.0 * std::abs(x(0) - 0.25)), 0.0);
  });
  CHECK(norm2(left_action(bump, one)) > 0.0);
}

TEST_CASE("right action and the bimodule law") {
  auto sample = small_sample("gasket-modified", 5);
  auto grid = sample->grid_ptr();
  Rng rng(31);
  CographFunction f = random_cograph_function(sample, rng);
  SampledFunction a = random_sampled_function(grid, rng);
  SampledFunction b = random_sampled_function(grid, rng);

  CographFunction lhs = right_action(left_action(a, f), b);
  CographFunction rhs = left_action(a, right_action(f, b));
  CHECK((lhs - rhs).sup_norm() <= 1e-12);

  // (f | g b)_A = (f|g)_A b and (f a | g)_A = conj(a) (f|g)_A
  CographFunction g = random_cograph_function(sample, rng);
  CHECK((inner_product(f, right_action(g, b)) - inner_product(f, g) * b).sup_norm() <= 1e-10);
  CHECK((inner_product(right_action(f, a), g) - inner_product(f, g) * a.conjugate()).sup_norm() <=
        1e-10);
}

TEST_CASE("norm2 equivalence window") {
  auto sample = small_sample("carpet", 3);
  double root_n = std::sqrt(8.0);
  CographFunction one = CographFunction::constant(sample, 1.0);
  CHECK(norm2(one) == doctest::Approx(root_n));
  CHECK(norm2(CographFunction::constant(sample, 0.0)) == 0.0);

  Rng rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    CographFunction f = random_cograph_function(sample, rng);
    CHECK(f.sup_norm() <= norm2(f) + 1e-12);
    CHECK(norm2(f) <= root_n * f.sup_norm() + 1e-12);
  }
}

TEST_CASE("rank one operators and their adjoints") {
  auto sample = small_sample("cantor", 9);
  Rng rng(23);
  CographFunction xi = random_cograph_function(sample, rng);

  // eta = zeta = the unit constant returns xi itself
  CographFunction unit = xi0(sample);
  CHECK((rank_one_apply(xi, unit, unit) - xi).sup_norm() <= 1e-12);

  // orthogonal argument gives zero: disjoint symbol supports
  Eigen::MatrixXcd v1m = Eigen::MatrixXcd::Zero(2, static_cast<long>(sample->grid().size()));
  Eigen::MatrixXcd v2m = v1m;
  v1m.row(0).setConstant(1.0);
  v2m.row(1).setConstant(1.0);
  CographFunction e1(sample, v1m), e2(sample, v2m);
  CHECK(norm2(rank_one_apply(xi, e1, e2)) == 0.0);

  // adjoint identity
  CographFunction eta = random_cograph_function(sample, rng);
  CographFunction z = random_cograph_function(sample, rng);
  CographFunction zp = random_cograph_function(sample, rng);
  SampledFunction lhs = inner_product(rank_one_apply(xi, eta, z), zp);
  SampledFunction rhs = inner_product(z, rank_one_apply(eta, xi, zp));
  CHECK((lhs - rhs).sup_norm() <= 1e-10);
}

TEST_CASE("xi0 realizes the transfer identities") {
  for (const char* name : {"cantor", "carpet"}) {
    auto sample = small_sample(name, name[1] == 'a' && name[2] == 'n' ? 9 : 3);
    CographFunction unit = xi0(sample);
    SampledFunction uu = inner_product(unit, unit);
    for (std::uint64_t u = 0; u < uu.size(); ++u)
      CHECK(std::abs(uu.at(u) - Complex(1.0, 0.0)) <= 1e-14);
  }
  // N = 4 system: the constant is 1/2
  Mat m(1, 1);
  m << 1.0 / 7.0;
  std::vector<ContractionMap> maps;
  for (int k = 0; k < 4; ++k) {
    Vec t(1);
    t << 2.0 * k / 7.0;
    maps.emplace_back(m, t);
  }
  IfsSystem four(1, maps, HullBall{Vec::Constant(1, 0.5), 0.5}, "four");
  auto sample4 = make_cograph_sample(make_grid(four, 5));
  CHECK(xi0(sample4).at(1, 0) == Complex(0.5, 0.0));
}

TEST_CASE("tensor_to_path: unit, multiplicativity, isometry") {
  auto sample = small_sample("tent", 9);
  Rng rng(41);

  // all-ones factors give the constant one
  std::vector<CographFunction> ones(3, CographFunction::constant(sample, 1.0));
  PathFunction unit = tensor_to_path(ones);
  CHECK((unit - PathFunction::constant(sample, 3, 1.0)).sup_norm() == 0.0);

  // pointwise multiplicativity
  std::vector<CographFunction> fs, gs, prods;
  for (int k = 0; k < 2; ++k) {
    fs.push_back(random_cograph_function(sample, rng));
    gs.push_back(random_cograph_function(sample, rng));
    prods.push_back(fs.back().pointwise_mul(gs.back()));
  }
  PathFunction lhs_mult = tensor_to_path(fs);
  PathFunction rhs_mult = tensor_to_path(gs);
  Eigen::MatrixXcd prod = lhs_mult.values().cwiseProduct(rhs_mult.values());
  CHECK((PathFunction(sample, 2, prod) - tensor_to_path(prods)).sup_norm() <= 1e-12);

  // isometry against the recursive route at n = 2
  SampledFunction tensor_ip = tensor_inner_product(fs, gs);
  SampledFunction path_ip = path_inner_product(lhs_mult, rhs_mult);
  CHECK((tensor_ip - path_ip).sup_norm() <= 1e-10);

  // depth-1 identification with the plain cograph inner product
  CographFunction f = random_cograph_function(sample, rng);
  CographFunction g = random_cograph_function(sample, rng);
  SampledFunction plain = inner_product(f, g);
  SampledFunction path1 = path_inner_product(path_from_cograph(f), path_from_cograph(g));
  CHECK((plain - path1).sup_norm() == 0.0);
}

TEST_CASE("cograph_pullback validates and preserves inner products") {
  auto sample = small_sample("cantor", 8);
  Rng rng(47);

  PathFunction constant = PathFunction::constant(sample, 2, Complex(0.3, -0.1));
  CHECK((cograph_pullback(constant) - constant).sup_norm() == 0.0);

  PathFunction f = random_gn_function(sample, 2, rng);
  PathFunction g = random_gn_function(sample, 2, rng);
  CHECK((path_inner_product(cograph_pullback(f), cograph_pullback(g)) -
         path_inner_product(f, g))
            .sup_norm() <= 1e-12);

  // cantor level-2 words have pairwise distinct endpoint maps, so any values
  // pass and the re-keying is a bijection
  Eigen::MatrixXcd arbitrary(4, static_cast<long>(sample->grid().size()));
  Rng rng2(48);
  for (long r = 0; r < arbitrary.rows(); ++r)
    for (long c = 0; c < arbitrary.cols(); ++c)
      arbitrary(r, c) = Complex(rng2.next_double(), rng2.next_double());
  PathFunction any(sample, 2, arbitrary);
  CHECK((cograph_pullback(any) - any).sup_norm() == 0.0);

  // on the tent system two level-1 sheets collide over y = 1: conflicting
  // values must be rejected
  auto tent = small_sample("tent", 8);
  Eigen::MatrixXcd conflict =
      Eigen::MatrixXcd::Zero(2, static_cast<long>(tent->grid().size()));
  for (std::uint64_t u : tent->merged_points()) conflict(0, static_cast<long>(u)) = 1.0;
  CHECK_THROWS_AS(cograph_pullback(PathFunction(tent, 1, conflict)), InvalidInputError);
}

TEST_CASE("path operators: forms agree with dense fibers") {
  auto sample = small_sample("tent", 7);
  Rng rng(53);
  int n = 2;
  PathOperator id = PathOperator::identity(sample, n);
  CHECK(id.op_norm() == doctest::Approx(1.0));

  SampledFunction a = random_sampled_function(sample->grid_ptr(), rng);
  PathOperator diag = PathOperator::left_mult(a, sample, n);
  PathFunction f = random_gn_function(sample, n, rng);
  PathFunction df = diag.apply(f);

  // dense reconstruction matches the structured application
  std::vector<Eigen::MatrixXcd> fibers;
  for (std::uint64_t u = 0; u < sample->grid().size(); ++u)
    fibers.push_back(diag.fiber_matrix(u));
  PathOperator dense = PathOperator::dense(sample, n, std::move(fibers));
  CHECK((dense.apply(f) - df).sup_norm() <= 1e-12);
  CHECK(dense.op_norm() == doctest::Approx(diag.op_norm()));

  PathOperator fr = random_finite_rank_operator(sample, n, 2, rng);
  std::vector<Eigen::MatrixXcd> fr_fibers;
  for (std::uint64_t u = 0; u < sample->grid().size(); ++u)
    fr_fibers.push_back(fr.fiber_matrix(u));
  PathOperator fr_dense = PathOperator::dense(sample, n, std::move(fr_fibers));
  CHECK((fr_dense.apply(f) - fr.apply(f)).sup_norm() <= 1e-10);
  CHECK(fr_dense.op_norm() == doctest::Approx(fr.op_norm()).epsilon(1e-9));
}

TEST_CASE("compact approximation: clean support converges, branch support obstructs") {
  const auto& tent = entry("tent");
  auto sample = make_cograph_sample(make_grid(tent.system, tent.grid_depth));
  BranchReport branch = branch_scan(tent.system, 10);

  SampledFunction away = SampledFunction::from_function(
      sample->grid_ptr(), [](const Vec& x) {
        return Complex(std::max(0.0, 1.0 - std::abs(x(0) - 0.75) / 0.15), 0.0);
      });
  CompactApproxResult good = compact_approx(away, branch, 8, true, sample, 25, 3);
  CHECK(good.ok);
  CHECK(good.residual <= 0.02);

  SampledFunction zero = SampledFunction::constant(sample->grid_ptr(), 0.0);
  CompactApproxResult trivial = compact_approx(zero, branch, 6, true, sample, 10, 3);
  CHECK(trivial.ok);
  CHECK(trivial.residual == 0.0);

  SampledFunction on_branch = SampledFunction::from_function(
      sample->grid_ptr(), [](const Vec& x) {
        return Complex(std::max(0.0, 1.0 - std::abs(x(0) - 0.5) / 0.1), 0.0);
      });
  CompactApproxResult obstructed = compact_approx(on_branch, branch, 8, true, sample, 25, 3);
  CHECK_FALSE(obstructed.ok);
  CHECK(obstructed.probe_lower_bound >= 1.0 / (4.0 * std::sqrt(2.0)) - 0.05);

  // without a verified open set condition the probe is unsupported
  CompactApproxResult unsupported = compact_approx(away, branch, 6, false, sample, 5, 3);
  CHECK_FALSE(unsupported.ok);
}
