// selfsim: batch front door for self-similar set computations.
//
// Exit codes: 0 holds/pass, 1 fails, 2 invalid input, 3 undetermined.

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "selfsim/errors.hpp"
#include "selfsim/io_json.hpp"
#include "selfsim/verify.hpp"

namespace {

using namespace selfsim;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUndetermined = 3;

IfsSystem resolve_input(const std::string& input) {
  if (const RegistryEntry* entry = find_registry_entry(input)) return entry->system;
  return load_ifs_file(input);
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Holds: return kExitPass;
    case Verdict::Fails: return kExitFail;
    case Verdict::Undetermined: return kExitUndetermined;
  }
  return kExitInvalid;
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_json_file(out_path, j);
}

// deterministic "%.6g" formatting, one point per line
void write_points_csv(const std::string& path, const std::vector<Vec>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open " + path + " for writing");
  char buf[64];
  for (const auto& p : points) {
    std::string line;
    for (int k = 0; k < p.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.6g", p(k));
      if (k) line += ",";
      line += buf;
    }
    out << line << "\n";
  }
}

// binary P6 raster; the hull square maps to the full image, row 0 at the top
void write_points_ppm(const std::string& path, const IfsSystem& system,
                      const std::vector<Vec>& points, int px) {
  const auto& hull = system.hull();
  double lo_x = hull.center(0) - hull.radius;
  double span = 2.0 * hull.radius;
  int width = px;
  int height = system.dimension() >= 2 ? px : std::max(16, px / 16);
  std::vector<unsigned char> img(static_cast<std::size_t>(width) * height * 3, 255);
  auto set_px = [&](int x, int y) {
    if (x < 0 || x >= width || y < 0 || y >= height) return;
    std::size_t at = (static_cast<std::size_t>(y) * width + x) * 3;
    img[at] = img[at + 1] = img[at + 2] = 0;
  };
  for (const auto& p : points) {
    int x = static_cast<int>((p(0) - lo_x) / span * (width - 1) + 0.5);
    if (system.dimension() >= 2) {
      double lo_y = hull.center(1) - hull.radius;
      int y = static_cast<int>((p(1) - lo_y) / span * (height - 1) + 0.5);
      set_px(x, height - 1 - y);
    } else {
      for (int y = 0; y < height; ++y) set_px(x, y);
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open " + path + " for writing");
  char header[160];
  std::snprintf(header, sizeof(header),
                "P6\n# hull center %.17g %.17g radius %.17g\n%d %d\n255\n", hull.center(0),
                system.dimension() >= 2 ? hull.center(1) : 0.0, hull.radius, width, height);
  out << header;
  out.write(reinterpret_cast<const char*>(img.data()), static_cast<long>(img.size()));
}

int cmd_render(const std::string& input, int depth, std::uint64_t iterations,
               std::uint64_t burn_in, std::uint64_t seed, const std::string& format,
               int px, const std::string& out_path) {
  IfsSystem system = resolve_input(input);
  std::vector<Vec> points;
  if (iterations > 0) {
    points = chaos_game(system, seed, iterations, burn_in);
  } else {
    CellTree tree = attractor_cells(system, depth);
    for (const auto& cell : tree.cells()) points.push_back(cell.center);
  }
  if (format == "csv")
    write_points_csv(out_path, points);
  else if (format == "ppm")
    write_points_ppm(out_path, system, points, px);
  else
    throw InvalidInputError("unknown render format \"" + format + "\"");
  return kExitPass;
}

int cmd_branch(const std::string& input, int depth, double tol, const std::string& out_path) {
  IfsSystem system = resolve_input(input);
  BranchReport report = branch_scan(system, depth, tol);
  emit(branch_report_to_json(report), out_path);
  return report.empty() ? kExitPass : kExitFail;
}

int cmd_check(const std::string& input, const std::string& condition,
              const std::string& witness_path, int depth, double tol,
              const std::string& out_path) {
  IfsSystem system = resolve_input(input);
  std::optional<Region> witness;
  if (!witness_path.empty()) {
    witness = load_region_file(witness_path);
  } else if (const RegistryEntry* entry = find_registry_entry(system.name())) {
    witness = entry->osc_witness;
  }
  SeparationReport report = check_separations(system, depth, tol, witness);
  emit(separation_report_to_json(report), out_path);
  if (condition == "strong") return verdict_exit(report.strong.verdict);
  if (condition == "graph") return verdict_exit(report.graph.verdict);
  if (condition == "osc") return verdict_exit(report.open_set.verdict);
  throw InvalidInputError("unknown condition \"" + condition + "\"");
}

int cmd_classify(const std::string& input, int depth, double tol,
                 const std::string& witness_path, const std::string& out_path) {
  IfsSystem system = resolve_input(input);
  std::optional<Region> witness;
  if (!witness_path.empty()) witness = load_region_file(witness_path);
  ClassificationReport report = classify(system, depth, tol, witness);
  emit(classification_to_json(report), out_path);
  return kExitPass;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int depth, double tol,
               const std::string& out_path) {
  SuiteResult result;
  if (suite == "bimodule")
    result = run_bimodule_suite(seed);
  else if (suite == "transfer")
    result = run_transfer_suite(seed);
  else if (suite == "registry")
    result = run_registry_suite(depth, tol);
  else
    throw InvalidInputError("unknown suite \"" + suite + "\"");

  Json j;
  j["schema_version"] = kSchemaVersion;
  j["suite"] = result.suite;
  j["seed"] = result.seed;
  j["depth"] = depth;
  j["tol"] = tol;
  j["pass"] = result.pass;
  j["seconds"] = result.seconds;
  Json checks = Json::array();
  for (const auto& c : result.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["worst"] = c.worst;
    cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
    std::fprintf(stderr, "[%s] %s\n", c.pass ? "pass" : "FAIL", c.name.c_str());
  }
  j["checks"] = std::move(checks);
  emit(j, out_path);
  return result.pass ? kExitPass : kExitFail;
}

int cmd_registry(const std::string& export_path) {
  emit(registry_to_json(), export_path);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for systems of affine contractions: attractors, branch "
               "sets, separation conditions, sampled bimodule structure, classification"};
  app.require_subcommand(1);

  std::string input, out_path, format = "csv", witness_path, condition, suite;
  int depth = 10, px = 512;
  double tol = 1e-9;
  std::uint64_t seed = 42, iterations = 0, burn_in = 64;

  auto* render = app.add_subcommand("render", "write attractor points as CSV or a PPM raster");
  render->add_option("-i,--input", input, "IFS definition file or registry name")->required();
  render->add_option("-d,--depth", depth, "cell depth for deterministic rendering");
  render->add_option("-n,--iterations", iterations,
                     "chaos-game sample count (overrides cell rendering)");
  render->add_option("--burn-in", burn_in, "chaos-game burn-in");
  render->add_option("--seed", seed, "chaos-game seed");
  render->add_option("-f,--format", format, "csv or ppm");
  render->add_option("--px", px, "PPM raster width");
  render->add_option("-o,--out", out_path, "output file")->required();

  auto* branch = app.add_subcommand("branch", "solve for the branch set");
  branch->add_option("-i,--input", input)->required();
  branch->add_option("-d,--depth", depth);
  branch->add_option("--tol", tol);
  branch->add_option("-o,--out", out_path);

  auto* check = app.add_subcommand("check", "decide a separation condition");
  check->add_option("-i,--input", input)->required();
  check->add_option("-c,--condition", condition, "strong, graph or osc")->required();
  check->add_option("-w,--witness", witness_path, "witness region file for osc");
  check->add_option("-d,--depth", depth);
  check->add_option("--tol", tol);
  check->add_option("-o,--out", out_path);

  auto* classify_cmd = app.add_subcommand("classify", "full classification report");
  classify_cmd->add_option("-i,--input", input)->required();
  classify_cmd->add_option("-d,--depth", depth);
  classify_cmd->add_option("--tol", tol);
  classify_cmd->add_option("-w,--witness", witness_path);
  classify_cmd->add_option("-o,--out", out_path);

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("-s,--suite", suite, "bimodule, transfer or registry")->required();
  verify->add_option("--seed", seed);
  verify->add_option("-d,--depth", depth);
  verify->add_option("--tol", tol);
  verify->add_option("-o,--out", out_path);

  auto* registry_cmd = app.add_subcommand("registry", "print or export the builtin registry");
  registry_cmd->add_option("-o,--export", out_path, "write registry JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (render->parsed())
      return cmd_render(input, depth, iterations, burn_in, seed, format, px, out_path);
    if (branch->parsed()) return cmd_branch(input, depth, tol, out_path);
    if (check->parsed()) return cmd_check(input, condition, witness_path, depth, tol, out_path);
    if (classify_cmd->parsed()) return cmd_classify(input, depth, tol, witness_path, out_path);
    if (verify->parsed()) return cmd_verify(suite, seed, depth, tol, out_path);
    if (registry_cmd->parsed()) return cmd_registry(out_path);
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
