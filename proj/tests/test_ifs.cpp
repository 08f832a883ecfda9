#include <doctest.h>

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/grid.hpp"
#include "selfsim/registry.hpp"
#include "selfsim/rng.hpp"

using namespace selfsim;

namespace {

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

const IfsSystem& sys(const char* name) { return find_registry_entry(name)->system; }

}  // namespace

TEST_CASE("apply_word composes outermost first") {
  const auto& tent = sys("tent");
  // gamma_1(gamma_2(0)) = gamma_1(1) = 1/2
  CHECK(apply_word(tent, Word({1, 2}), v1(0.0))(0) == doctest::Approx(0.5));
  // empty word is the identity
  CHECK(apply_word(tent, Word{}, v1(0.37))(0) == doctest::Approx(0.37));
  // cantor: gamma_2(gamma_1(0)) = gamma_2(0) = 2/3
  CHECK(apply_word(sys("cantor"), Word({2, 1}), v1(0.0))(0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("composition law on random words") {
  Rng rng(101);
  for (const char* name : {"cantor", "gasket-modified", "carpet-modified"}) {
    const auto& system = sys(name);
    for (int rep = 0; rep < 25; ++rep) {
      auto random_word = [&](int len) {
        Word w;
        for (int k = 0; k < len; ++k)
          w.symbols.push_back(rng.uniform_int(1, system.map_count()));
        return w;
      };
      Word u = random_word(rng.uniform_int(0, 4));
      Word v = random_word(rng.uniform_int(0, 4));
      Vec x(system.dimension());
      for (int d = 0; d < system.dimension(); ++d) x(d) = rng.uniform(-0.2, 1.2);
      Vec lhs = apply_word(system, u.concat(v), x);
      Vec rhs = apply_word(system, u, apply_word(system, v, x));
      CHECK((lhs - rhs).norm() <= 1e-12);
    }
  }
}

TEST_CASE("attractor cells: counts, radii, nesting") {
  const auto& cantor = sys("cantor");
  CellTree depth1 = attractor_cells(cantor, 1);
  REQUIRE(depth1.cells().size() == 2);
  // [0, 1/3] and [2/3, 1] as center/radius intervals
  CHECK(depth1.cells()[0].center(0) == doctest::Approx(1.0 / 6.0));
  CHECK(depth1.cells()[0].radius == doctest::Approx(1.0 / 6.0));
  CHECK(depth1.cells()[1].center(0) == doctest::Approx(5.0 / 6.0));
  CHECK(depth1.cells()[1].radius == doctest::Approx(1.0 / 6.0));

  CellTree root = attractor_cells(cantor, 0);
  REQUIRE(root.cells().size() == 1);
  CHECK(root.cells()[0].radius == doctest::Approx(0.5));

  const auto& gasket = sys("gasket");
  CellTree g2 = attractor_cells(gasket, 2);
  REQUIRE(g2.cells().size() == 9);
  for (const auto& cell : g2.cells())
    CHECK(cell.radius == doctest::Approx(0.25 * gasket.hull().radius));

  // nesting: child cell inside the parent cell, several systems and depths
  for (const char* name : {"cantor", "tent", "gasket-modified"}) {
    const auto& system = sys(name);
    for (int depth = 0; depth < 5; ++depth) {
      CellTree parents = attractor_cells(system, depth);
      CellTree children = attractor_cells(system, depth + 1);
      const std::uint64_t n = static_cast<std::uint64_t>(system.map_count());
      for (std::uint64_t c = 0; c < children.cells().size(); ++c) {
        // child (w, i) sits under parent w: child index = parent * N + i - 1
        const Cell& child = children.cells()[c];
        const Cell& parent = parents.cells()[c / n];
        CHECK((child.center - parent.center).norm() + child.radius <=
              parent.radius + 1e-12);
      }
    }
  }

  // diameter decay bound
  for (int depth : {3, 6}) {
    CellTree tree = attractor_cells(sys("koch"), depth);
    double bound = std::pow(sys("koch").max_upper_bound(), depth) * sys("koch").hull().radius;
    for (const auto& cell : tree.cells()) CHECK(cell.radius <= bound + 1e-12);
  }

  CHECK_THROWS_AS(attractor_cells(sys("carpet"), 12).cells(), ResourceLimitError);
}

TEST_CASE("coding points with certified error bounds") {
  const auto& cantor = sys("cantor");
  // all-ones prefixes stay at the fixed point 0
  for (int len : {1, 4, 9}) {
    Word w(std::vector<int>(static_cast<std::size_t>(len), 1));
    CodedPoint cp = coding_point(cantor, w);
    CHECK(std::abs(cp.point(0)) <= 1e-15);
    CHECK(cp.error_bound == doctest::Approx(std::pow(1.0 / 3.0, len)));
  }
  // all-twos converge to 1
  Word twos(std::vector<int>(9, 2));
  CHECK(coding_point(cantor, twos).point(0) == doctest::Approx(1.0).epsilon(1e-3));
  // prefix (2,1): gamma_2(gamma_1(0)) = 2/3, bound (1/3)^2 * 1
  CodedPoint cp = coding_point(cantor, Word({2, 1}));
  CHECK(cp.point(0) == doctest::Approx(2.0 / 3.0));
  CHECK(cp.error_bound == doctest::Approx(1.0 / 9.0));
  CHECK_THROWS_AS(coding_point(cantor, Word{}), InvalidInputError);
}

TEST_CASE("semiconjugacy residuals stay within the coding bounds") {
  const auto& cantor = sys("cantor");
  Word prefix(std::vector<int>(6, 2));
  double r = semiconjugacy_residual(cantor, 1, prefix);
  CHECK(r <= 2.0 * std::pow(1.0 / 3.0, 6));
  CHECK(r <= 1e-12);  // identical affine compositions agree to rounding

  const auto& tent = sys("tent");
  Word ones(std::vector<int>(4, 1));
  CHECK(semiconjugacy_residual(tent, 2, ones) <= 2.0 * std::pow(0.5, 4));

  // fixed-point word of the same symbol gives zero
  CHECK(semiconjugacy_residual(cantor, 1, Word({1, 1, 1})) <= 1e-15);
}

TEST_CASE("chaos game: determinism, precondition, containment") {
  const auto& cantor = sys("cantor");
  auto pts_a = chaos_game(cantor, 99, 2000, 64);
  auto pts_b = chaos_game(cantor, 99, 2000, 64);
  REQUIRE(pts_a.size() == pts_b.size());
  for (std::size_t k = 0; k < pts_a.size(); ++k) CHECK(pts_a[k] == pts_b[k]);

  CHECK_THROWS_AS(chaos_game(cantor, 1, 50, 50), InvalidInputError);

  // every emitted point lies within 1e-6 of the depth-13 cell union
  auto pts = chaos_game(cantor, 7, 10064, 64);
  CellTree tree(cantor, 13);
  for (const auto& p : pts) CHECK(tree.contains(p, 1e-6));
}

TEST_CASE("coding surjectivity at resolution: chaos points hit every cell") {
  for (const char* name : {"cantor", "gasket"}) {
    const auto& system = sys(name);
    int depth = name == std::string("cantor") ? 6 : 4;
    CellTree tree = attractor_cells(system, depth);
    auto pts = chaos_game(system, 5, 60000, 64);
    for (const auto& cell : tree.cells()) {
      bool hit = false;
      for (const auto& p : pts)
        if ((p - cell.center).norm() <= cell.radius + 1e-12) {
          hit = true;
          break;
        }
      CHECK(hit);
    }
  }
}

TEST_CASE("sample grid: points in cells, tolerance bound, truncation composition") {
  for (const char* name : {"tent", "gasket-modified", "carpet-modified"}) {
    const auto& system = sys(name);
    auto grid = make_grid(system, 5);
    CHECK(grid->size() == pow_u64(system.map_count(), 5));
    CHECK(grid->tol() == doctest::Approx(2.0 * std::pow(system.max_upper_bound(), 5) * 2.0 *
                                         system.hull().radius));

    CellTree tree = attractor_cells(system, 5);
    const auto& table = grid->words();
    for (std::uint64_t u = 0; u < grid->size(); ++u) {
      const Cell& cell = tree.cells()[u];
      CHECK((grid->point(u) - cell.center).norm() <= cell.radius + 1e-12);
      // truncated composition approximates the exact image within tol/2
      for (int i = 1; i <= system.map_count(); ++i) {
        Vec exact = system.map(i).apply(grid->point(u));
        Vec snapped = grid->point(grid->compose(i, u));
        CHECK((exact - snapped).norm() <= grid->tol() / 2.0 + 1e-12);
      }
      (void)table;
    }
  }
}

TEST_CASE("grid nearest point is exact on grid points and deterministic on ties") {
  const auto& tent = sys("tent");
  auto grid = make_grid(tent, 6);
  for (std::uint64_t u = 0; u < grid->size(); u += 7) {
    std::uint64_t n = grid->nearest(grid->point(u));
    CHECK(grid->point(n) == grid->point(u));  // may be an equal duplicate word
    CHECK(n <= u);                            // ties resolve to the smallest word
  }
  CHECK(grid->nearest(v1(-10.0)) == grid->nearest(v1(-9.0)));
}
