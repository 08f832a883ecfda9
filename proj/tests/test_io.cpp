#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "selfsim/errors.hpp"
#include "selfsim/io_json.hpp"

using namespace selfsim;

namespace {

Json cantor_json() {
  return Json{{"name", "cantor"},
              {"dimension", 1},
              {"hull", {{"center", {0.5}}, {"radius", 0.5}}},
              {"maps",
               {{{"matrix", {{1.0 / 3.0}}}, {"offset", {0.0}}},
                {{"matrix", {{1.0 / 3.0}}}, {"offset", {2.0 / 3.0}}}}}};
}

}  // namespace

TEST_CASE("ifs json round trip") {
  IfsSystem cantor = load_ifs(cantor_json());
  CHECK(cantor.map_count() == 2);
  CHECK(cantor.dimension() == 1);
  Json back = ifs_to_json(cantor);
  IfsSystem again = load_ifs(back);
  CHECK(again.content_hash() == cantor.content_hash());
}

TEST_CASE("ifs json rejects malformed and improper systems") {
  Json missing = cantor_json();
  missing.erase("hull");
  CHECK_THROWS_AS(load_ifs(missing), InvalidInputError);

  Json improper = cantor_json();
  improper["maps"][0]["matrix"] = {{1.0}};  // isometry, not a proper contraction
  CHECK_THROWS_AS(load_ifs(improper), InvalidInputError);

  Json escaping = cantor_json();
  escaping["maps"][1]["offset"] = {5.0};  // leaves the hull
  CHECK_THROWS_AS(load_ifs(escaping), InvalidInputError);

  Json one_map = cantor_json();
  one_map["maps"].erase(1);
  CHECK_THROWS_AS(load_ifs(one_map), InvalidInputError);
}

TEST_CASE("region json round trips every kind") {
  for (const char* text :
       {R"({"kind":"box","min":[0.0],"max":[1.0]})",
        R"({"kind":"ball","center":[0.5,0.5],"radius":0.3})",
        R"({"kind":"polygon","vertices":[[0.0,0.0],[1.0,0.0],[0.5,0.8]]})",
        R"({"kind":"union","parts":[{"kind":"box","min":[0.0],"max":[0.4]},)"
        R"({"kind":"box","min":[0.6],"max":[1.0]}]})",
        R"({"kind":"hull_interior"})"}) {
    Region region = load_region(Json::parse(text));
    Region again = load_region(region_to_json(region));
    CHECK(region.kind == again.kind);
  }
  CHECK_THROWS_AS(load_region(Json::parse(R"({"kind":"donut"})")), InvalidInputError);
}

TEST_CASE("registry export includes all ten systems with expectations") {
  Json j = registry_to_json();
  REQUIRE(j["entries"].size() == 10);
  for (const auto& e : j["entries"]) {
    CHECK(e.contains("system"));
    CHECK(e.contains("expected"));
    IfsSystem sys = load_ifs(e["system"]);  // every shipped system loads cleanly
    CHECK(sys.map_count() >= 2);
  }
}

TEST_CASE("report serializers embed resolution metadata") {
  IfsSystem cantor = load_ifs(cantor_json());
  Json branch = branch_report_to_json(branch_scan(cantor, 8));
  CHECK(branch["schema_version"] == kSchemaVersion);
  CHECK(branch["depth"] == 8);
  CHECK(branch["cardinality"] == "empty");

  Json cls = classification_to_json(classify(cantor, 8, 1e-9));
  CHECK(cls["verdict"] == "cuntz-algebra");
  CHECK(cls["algebra"] == "O_2");
  CHECK(cls["separation"]["strong"]["verdict"] == "holds");
}

TEST_CASE("witness constructions serialize with their provenance") {
  const auto* tent = find_registry_entry("tent");
  auto sample = make_cograph_sample(make_grid(tent->system, 10));
  auto grid = sample->grid_ptr();

  SampledFunction a = SampledFunction::from_function(
      grid, [](const Vec& x) { return Complex(1.0 - 0.5 * x(0) * x(0), 0.0); });
  AmplifyWitness w = amplify(sample, a, 0.1);
  Json wj = amplify_witness_to_json(w);
  CHECK(wj["tensor_depth"] == w.tensor_depth);
  CHECK(wj["norm_a"].get<double>() == doctest::Approx(1.0));
  CHECK(wj["attained_min"].get<double>() >= 0.9 - 1e-9);
  CHECK(wj.contains("locator_word"));
  CHECK(wj.contains("plateau_radius"));

  SeparatingFunction s =
      separating_function(PathOperator::identity(sample, 2), 0.1, *tent->osc_witness);
  Json sj = separating_function_to_json(s);
  CHECK(sj["invariance_spread"] == 0.0);
  CHECK(sj["full_word"].size() == s.locator.length() + 2);
  CHECK(sj["attained"].get<double>() > 0.9);

  BranchReport branch = branch_scan(tent->system, 10);
  SampledFunction off = SampledFunction::from_function(grid, [](const Vec& x) {
    return Complex(std::max(0.0, 1.0 - std::abs(x(0) - 0.75) / 0.1), 0.0);
  });
  Json cj = compact_approx_to_json(compact_approx(off, branch, 7, true, sample, 10, 3), 10);
  CHECK(cj["ok"] == true);
  CHECK(cj["partition_depth"] == 7);
  CHECK(cj["residual"].get<double>() <= 0.02);

  Json fj = sampled_function_to_json(a);
  CHECK(fj["grid_depth"] == 10);
  CHECK(fj["values"].size() == grid->size());
}
