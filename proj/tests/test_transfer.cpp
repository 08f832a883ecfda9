#include <doctest.h>

#include <cmath>

#include "selfsim/registry.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/transfer.hpp"

using namespace selfsim;

namespace {

const RegistryEntry& entry(const char* name) { return *find_registry_entry(name); }

CographSamplePtr sample_of(const char* name, int depth) {
  return make_cograph_sample(make_grid(entry(name).system, depth));
}

}  // namespace

TEST_CASE("beta: constants, coordinates, multiplicativity") {
  auto sample = sample_of("tent", 10);
  auto grid = sample->grid_ptr();

  SampledFunction c = SampledFunction::constant(grid, Complex(0.3, 0.7));
  CHECK((beta(1, c) - c).sup_norm() == 0.0);

  SampledFunction coord = SampledFunction::from_function(
      grid, [](const Vec& x) { return Complex(x(0), 0.0); });
  SampledFunction b1 = beta(1, coord);
  for (std::uint64_t u = 0; u < grid->size(); ++u)
    CHECK(std::abs(b1.at(u) - Complex(grid->point(u)(0) / 2.0, 0.0)) <= grid->tol());

  Rng rng(61);
  SampledFunction a = random_sampled_function(grid, rng);
  SampledFunction b = random_sampled_function(grid, rng);
  for (int i = 1; i <= 2; ++i)
    CHECK((beta(i, a * b) - beta(i, a) * beta(i, b)).sup_norm() <= 1e-12);
}

TEST_CASE("transfer map: unital, averaging, positive") {
  auto sample = sample_of("tent", 10);
  auto grid = sample->grid_ptr();

  SampledFunction one = SampledFunction::constant(grid, 1.0);
  CHECK((transfer_op(one) - one).sup_norm() == 0.0);

  // E(y -> y) = (y/2 + 1 - y/2)/2 = 1/2 on the tent system
  SampledFunction coord = SampledFunction::from_function(
      grid, [](const Vec& x) { return Complex(x(0), 0.0); });
  SampledFunction e = transfer_op(coord);
  for (std::uint64_t u = 0; u < grid->size(); ++u)
    CHECK(std::abs(e.at(u) - Complex(0.5, 0.0)) <= grid->tol());

  Rng rng(67);
  SampledFunction pos = random_positive_function(grid, rng);
  CHECK(transfer_op(pos).min_real() >= 0.0);

  // module form of the isometry relation, exact on the grid
  CographFunction unit = xi0(sample);
  for (int rep = 0; rep < 20; ++rep) {
    SampledFunction a = random_sampled_function(grid, rng);
    SampledFunction lhs = transfer_op(a);
    SampledFunction rhs = inner_product(unit, left_action(a, unit));
    CHECK((lhs - rhs).sup_norm() <= 1e-13);
  }
}

TEST_CASE("invariance certificates and their failure reports") {
  auto sample = sample_of("tent", 10);
  auto grid = sample->grid_ptr();

  auto ok = certify_invariant(SampledFunction::constant(grid, 0.9), 3, 1e-12);
  REQUIRE(std::holds_alternative<InvariantFunction>(ok));
  CHECK(std::get<InvariantFunction>(ok).worst_spread == 0.0);
  CHECK(std::get<InvariantFunction>(ok).iterates.size() == 3);

  // the coordinate fails at length 1 with the witness pair over y = 0
  SampledFunction coord = SampledFunction::from_function(
      grid, [](const Vec& x) { return Complex(x(0), 0.0); });
  auto bad = certify_invariant(coord, 1, 1e-6);
  REQUIRE(std::holds_alternative<InvarianceFailure>(bad));
  const auto& fail = std::get<InvarianceFailure>(bad);
  CHECK(fail.length == 1);
  CHECK(fail.spread > 0.1);

  // suffix-indexed functions are invariant by word arithmetic
  std::uint64_t block = 4;  // N^2
  Eigen::VectorXcd vals(static_cast<long>(grid->size()));
  for (std::uint64_t u = 0; u < grid->size(); ++u)
    vals[static_cast<long>(u)] = Complex(std::sin(0.1 * static_cast<double>(u % (grid->size() / block))), 0.0);
  auto cert = certify_invariant(SampledFunction(grid, vals), 2, 1e-12);
  REQUIRE(std::holds_alternative<InvariantFunction>(cert));
  CHECK(std::get<InvariantFunction>(cert).worst_spread == 0.0);
}

TEST_CASE("commutation residuals: certified functions commute, others do not") {
  auto sample = sample_of("tent", 10);
  auto grid = sample->grid_ptr();
  Rng rng(71);

  auto cert = certify_invariant(SampledFunction::constant(grid, Complex(0.4, 0.1)), 2, 1e-12);
  const auto& inv = std::get<InvariantFunction>(cert);
  CographFunction f = random_cograph_function(sample, rng);
  CHECK(commutation_check(inv, f) <= 1e-12);

  // iterated form on a tensor image
  std::vector<CographFunction> factors{f, random_cograph_function(sample, rng)};
  CHECK(commutation_check_path(inv, tensor_to_path(factors)) <= 1e-12);

  // negative control: a(y) = y against the constant section
  Eigen::VectorXcd vals(static_cast<long>(grid->size()));
  for (std::uint64_t u = 0; u < grid->size(); ++u)
    vals[static_cast<long>(u)] = Complex(grid->point(u)(0), 0.0);
  InvariantFunction fake;
  fake.fn = SampledFunction(grid, vals);
  fake.depth = 1;
  fake.tol = 1.0;
  fake.iterates.push_back(beta(1, fake.fn));
  CHECK(commutation_check(fake, CographFunction::constant(sample, 1.0)) > 0.1);
}

TEST_CASE("amplify on a constant function accepts any epsilon in range") {
  auto sample = sample_of("cantor", 10);
  SampledFunction c = SampledFunction::constant(sample->grid_ptr(), 0.8);
  AmplifyWitness w = amplify(sample, c, 0.2);
  SampledFunction ff = sparse_inner_product(w.f, w.f);
  for (std::uint64_t u = 0; u < ff.size(); ++u)
    CHECK(std::abs(ff.at(u) - Complex(1.0, 0.0)) <= 1e-9);
  CHECK(w.attained_min == doctest::Approx(0.8));
  CHECK(w.attained_max == doctest::Approx(0.8));
}

TEST_CASE("amplify on the tent coordinate keeps the witness in range") {
  auto sample = sample_of("tent", 13);
  SampledFunction coord = SampledFunction::from_function(
      sample->grid_ptr(), [](const Vec& x) { return Complex(x(0), 0.0); });
  AmplifyWitness w = amplify(sample, coord, 0.1);
  CHECK(w.norm_a == doctest::Approx(1.0));
  CHECK(w.attained_min >= 0.9 - 1e-9);
  CHECK(w.attained_max <= 1.0 + 1e-9);

  SparsePathFunction u = normalize_witness(coord, w);
  CHECK(norm2(u) <= std::pow(0.9, -0.5) + 1e-9);
  SampledFunction uau = sparse_phi_inner(coord, u);
  for (std::uint64_t k = 0; k < uau.size(); ++k)
    CHECK(std::abs(uau.at(k) - Complex(1.0, 0.0)) <= 1e-9);
}

TEST_CASE("sparse witnesses agree with the dense path machinery") {
  auto sample = sample_of("tent", 10);
  Rng rng(83);
  SampledFunction a = random_positive_function(sample->grid_ptr(), rng);
  a = a * Complex(1.0 / a.sup_norm(), 0.0);
  AmplifyWitness w = amplify(sample, a, 0.1);

  PathFunction dense = w.f.to_dense();
  SampledFunction sparse_ip = sparse_inner_product(w.f, w.f);
  SampledFunction dense_ip = path_inner_product(dense, dense);
  CHECK((sparse_ip - dense_ip).sup_norm() <= 1e-14);

  SampledFunction sparse_phiaf = sparse_phi_inner(a, w.f);
  SampledFunction dense_phiaf = path_inner_product(
      dense, PathOperator::left_mult(a, sample, w.tensor_depth).apply(dense));
  CHECK((sparse_phiaf - dense_phiaf).sup_norm() <= 1e-13);
  CHECK(norm2(w.f) == doctest::Approx(norm2(dense)));
}

TEST_CASE("amplify peaked near zero on the cantor system walks down the first branch") {
  auto sample = sample_of("cantor", 10);
  SampledFunction bump = SampledFunction::from_function(
      sample->grid_ptr(), [](const Vec& x) {
        return Complex(1.0 / (1.0 + 10.0 * x(0) * x(0)), 0.0);
      });
  AmplifyWitness w = amplify(sample, bump, 0.2);
  CHECK(w.peak(0) == doctest::Approx(0.0));
  for (int s : w.locator.symbols) CHECK(s == 1);
}

TEST_CASE("separating function contracts for the identity operator") {
  auto sample = sample_of("tent", 13);
  const Region& witness = *entry("tent").osc_witness;

  for (int n : {1, 2}) {
    PathOperator id = PathOperator::identity(sample, n);
    SeparatingFunction s = separating_function(id, 0.1, witness);
    CHECK(s.a.worst_spread == 0.0);
    CHECK(s.norm_T == doctest::Approx(1.0));
    CHECK(s.attained > 1.0 - 0.1);
    // the appended constants from the construction
    REQUIRE(s.full_word.length() == s.locator.length() + static_cast<std::size_t>(n));
    CHECK(s.full_word.symbols[s.locator.length()] == 2);
    for (std::size_t k = s.locator.length() + 1; k < s.full_word.length(); ++k)
      CHECK(s.full_word.symbols[k] == 1);
    // disjoint iterate supports, exact
    for (int p = 1; p < n; ++p)
      for (int q = p + 1; q <= n; ++q) {
        const auto& bp = s.a.iterate(p);
        const auto& bq = s.a.iterate(q);
        for (std::uint64_t u = 0; u < bp.size(); ++u)
          CHECK(std::abs(bp.at(u) * bq.at(u)) == 0.0);
      }
  }
}

TEST_CASE("separating function with the zero operator still enforces structure") {
  auto sample = sample_of("cantor", 13);
  PathOperator zero(sample, 2);
  SeparatingFunction s = separating_function(zero, 0.1, *entry("cantor").osc_witness);
  CHECK(s.norm_T == 0.0);
  CHECK(s.a.worst_spread == 0.0);
  CHECK(s.a.fn.sup_norm() > 0.0);
}
