#include <doctest.h>

#include "selfsim/contraction.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/registry.hpp"
#include "selfsim/words.hpp"

using namespace selfsim;

namespace {

Mat m1(double a) {
  Mat m(1, 1);
  m << a;
  return m;
}

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

}  // namespace

TEST_CASE("word table round trip and truncation arithmetic") {
  WordTable table(3, 4);
  CHECK(table.size() == 81);
  for (std::uint64_t idx : {0ull, 1ull, 26ull, 80ull}) {
    Word w = table.word_at(idx);
    CHECK(table.index_of(w) == idx);
  }
  CHECK(table.word_at(0).symbols == std::vector<int>{1, 1, 1, 1});
  CHECK(table.word_at(80).symbols == std::vector<int>{3, 3, 3, 3});

  // prepend 2 to (1,3,2,1) and drop the tail symbol: (2,1,3,2)
  Word w({1, 3, 2, 1});
  std::uint64_t idx = table.index_of(w);
  Word expect({2, 1, 3, 2});
  CHECK(table.prepend_trunc(2, idx) == table.index_of(expect));
  CHECK(table.leading_symbol(table.index_of(expect)) == 2);
}

TEST_CASE("contraction bounds are exact singular values") {
  // Cantor branch: matrix [1/3]
  auto [c1, c1p] = contraction_bounds(ContractionMap(m1(1.0 / 3.0), v1(0.0)));
  CHECK(c1 == doctest::Approx(1.0 / 3.0));
  CHECK(c1p == doctest::Approx(1.0 / 3.0));

  // decreasing tent branch: matrix [-1/2]
  auto [c2, c2p] = contraction_bounds(ContractionMap(m1(-0.5), v1(1.0)));
  CHECK(c2 == doctest::Approx(0.5));
  CHECK(c2p == doctest::Approx(0.5));

  // degenerate zero matrix is not proper
  auto [c3, c3p] = contraction_bounds(ContractionMap(m1(0.0), v1(0.0)));
  CHECK(c3 == 0.0);
  CHECK(c3p == 0.0);

  // 2-d reflection similarity: both singular values 1/sqrt(3)
  const auto& koch = find_registry_entry("koch")->system;
  auto [k1, k1p] = contraction_bounds(koch.map(1));
  CHECK(k1 == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(k1p == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(koch.map(1).is_similarity());

  Mat bad(1, 2);
  bad << 1.0, 2.0;
  CHECK_THROWS_AS(contraction_bounds(ContractionMap(bad, v1(0.0))), InvalidInputError);
}

TEST_CASE("verify_proper on the builtin systems") {
  for (const char* name : {"gasket", "carpet", "cantor", "koch-modified"}) {
    PropernessReport report = verify_proper(find_registry_entry(name)->system);
    CHECK(report.pass());
  }
  PropernessReport gasket = verify_proper(find_registry_entry("gasket")->system);
  for (const auto& entry : gasket.per_map) {
    CHECK(entry.lower == doctest::Approx(0.5));
    CHECK(entry.upper == doctest::Approx(0.5));
  }
  PropernessReport carpet = verify_proper(find_registry_entry("carpet")->system);
  for (const auto& entry : carpet.per_map) {
    CHECK(entry.lower == doctest::Approx(1.0 / 3.0));
    CHECK(entry.upper == doctest::Approx(1.0 / 3.0));
  }

  // boundary of properness: an isometry piece fails
  IfsSystem flat(1, {ContractionMap(m1(1.0), v1(0.0)), ContractionMap(m1(0.5), v1(0.5))},
                 HullBall{v1(0.5), 0.5}, "flat");
  CHECK_FALSE(verify_proper(flat).pass());
  CHECK_FALSE(verify_proper(flat).per_map[0].proper);
}
