// End-to-end checks of the command line tool: files in, files out, exit codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "selfsim/io_json.hpp"

using namespace selfsim;

namespace {

const char* cli = SELFSIM_CLI_PATH;

std::string tmp_path(const std::string& stem) {
  return std::string("/tmp/selfsim_cli_") + stem;
}

int run(const std::string& args) {
  std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_cantor_file(const std::string& path) {
  write_json_file(path, ifs_to_json(find_registry_entry("cantor")->system));
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("render: cell csv line counts and byte determinism") {
  std::string input = tmp_path("cantor.json");
  write_cantor_file(input);
  std::string out_a = tmp_path("render_a.csv");
  std::string out_b = tmp_path("render_b.csv");
  CHECK(run("render -i " + input + " -d 6 -f csv -o " + out_a) == 0);
  CHECK(run("render -i " + input + " -d 6 -f csv -o " + out_b) == 0);
  CHECK(line_count(slurp(out_a)) == 64);
  CHECK(slurp(out_a) == slurp(out_b));
}

TEST_CASE("render: gasket raster stays inside the hull") {
  std::string out = tmp_path("gasket.ppm");
  CHECK(run("render -i gasket -d 7 -f ppm --px 512 -o " + out) == 0);
  std::string ppm = slurp(out);
  REQUIRE(ppm.substr(0, 2) == "P6");
  // parse header: magic, comment line, dimensions, maxval
  std::istringstream is(ppm);
  std::string magic, comment;
  std::getline(is, magic);
  std::getline(is, comment);
  int width = 0, height = 0, maxval = 0;
  is >> width >> height >> maxval;
  is.get();  // the single whitespace after maxval
  REQUIRE(width == 512);
  REQUIRE(maxval == 255);
  const auto& hull = find_registry_entry("gasket")->system.hull();
  std::size_t offset = static_cast<std::size_t>(is.tellg());
  std::size_t set_pixels = 0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      std::size_t at = offset + (static_cast<std::size_t>(y) * width + x) * 3;
      if (ppm[at] == 0) {
        ++set_pixels;
        double wx = hull.center(0) - hull.radius +
                    (2.0 * hull.radius) * x / (width - 1);
        double wy = hull.center(1) - hull.radius +
                    (2.0 * hull.radius) * (height - 1 - y) / (height - 1);
        Vec p(2);
        p << wx, wy;
        CHECK((p - hull.center).norm() <= hull.radius * 1.01);
      }
    }
  CHECK(set_pixels > 0);
}

TEST_CASE("render rejects a chaos game with no emitted points") {
  std::string input = tmp_path("cantor.json");
  write_cantor_file(input);
  CHECK(run("render -i " + input + " -n 64 --burn-in 64 -f csv -o " + tmp_path("none.csv")) ==
        2);
}

TEST_CASE("branch: exit codes and report bodies") {
  std::string report = tmp_path("branch.json");
  CHECK(run("branch -i tent -d 10 -o " + report) == 1);
  Json j = read_json_file(report);
  CHECK(j["cardinality"] == "finite");
  CHECK(j["count"] == 1);
  CHECK(j["branch_points"][0]["x"][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["branch_points"][0]["y"][0].get<double>() == doctest::Approx(1.0));

  CHECK(run("branch -i cantor -d 10 -o " + tmp_path("b2.json")) == 0);

  CHECK(run("branch -i carpet-modified -d 10 -o " + report) == 1);
  CHECK(read_json_file(report)["cardinality"] == "infinite-at-resolution");

  CHECK(run("branch -i /nonexistent.json") == 2);
}

TEST_CASE("check: separation conditions drive the exit code") {
  std::string witness = tmp_path("unit.json");
  write_json_file(witness, Json{{"kind", "box"}, {"min", {0.0}}, {"max", {1.0}}});

  CHECK(run("check -i tent -c osc -w " + witness) == 0);
  CHECK(run("check -i tent-modified -c strong -o " + tmp_path("sep.json")) == 1);
  Json sep = read_json_file(tmp_path("sep.json"));
  CHECK(sep["strong"]["witness"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(run("check -i tent-modified -c graph") == 0);

  // osc with no witness on a non-registry system: undetermined
  std::string anon = tmp_path("anon.json");
  Json j = ifs_to_json(find_registry_entry("tent")->system);
  j["name"] = "anonymous";
  write_json_file(anon, j);
  CHECK(run("check -i " + anon + " -c osc") == 3);
  // the registry variant auto-loads its witness
  CHECK(run("check -i tent -c osc") == 0);
}

TEST_CASE("classify: end-to-end files") {
  std::string out = tmp_path("classify.json");
  CHECK(run("classify -i carpet -d 10 -o " + out) == 0);
  Json j = read_json_file(out);
  CHECK(j["verdict"] == "cuntz-algebra");
  CHECK(j["algebra"] == "O_8");

  CHECK(run("classify -i tent -d 10 -o " + out) == 0);
  j = read_json_file(out);
  CHECK(j["verdict"] == "not-graph-separated");
  CHECK(j["branch_count"] == 1);
  CHECK(j["dim_A_mod_IX"] == 1);
}

TEST_CASE("registry export matches the shipped data file") {
  std::string out = tmp_path("registry.json");
  CHECK(run("registry -o " + out) == 0);
  std::string shipped = std::string(SELFSIM_DATA_DIR) + "/registry.json";
  CHECK(slurp(out) == slurp(shipped));
}

TEST_CASE("verify: registry suite passes end to end") {
  std::string out = tmp_path("verify.json");
  CHECK(run("verify -s registry -d 10 --tol 1e-9 -o " + out) == 0);
  Json j = read_json_file(out);
  CHECK(j["pass"] == true);
  CHECK(j["suite"] == "registry");
  CHECK(run("verify -s nosuch") == 2);
}
