#include "selfsim/io_json.hpp"

#include <fstream>

#include "selfsim/errors.hpp"

namespace selfsim {

namespace {

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInputError("expected a nonempty numeric array");
  Vec v(static_cast<long>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw InvalidInputError("expected a numeric array entry");
    v(static_cast<long>(k)) = j[k].get<double>();
  }
  return v;
}

Json mat_to_json(const Mat& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Mat mat_from_json(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw InvalidInputError("matrix must be a row-major array of " + std::to_string(dim) +
                            " rows");
  Mat m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw InvalidInputError("matrix row " + std::to_string(r) + " must have " +
                              std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c) {
      const Json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) throw InvalidInputError("matrix entries must be numeric");
      m(r, c) = cell.get<double>();
    }
  }
  return m;
}

Json verdict_json(const SeparationVerdict& v) {
  Json out;
  out["verdict"] = verdict_name(v.verdict);
  if (v.witness) out["witness"] = vec_to_json(*v.witness);
  out["gap"] = v.gap;
  out["depth"] = v.depth;
  if (!v.detail.empty()) out["detail"] = v.detail;
  return out;
}

}  // namespace

IfsSystem load_ifs(const Json& j) {
  if (!j.is_object()) throw InvalidInputError("system definition must be a JSON object");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw InvalidInputError("system definition needs an integer \"dimension\"");
  int dim = j["dimension"].get<int>();
  if (dim < 1 || dim > 3) throw InvalidInputError("dimension must be 1, 2 or 3");
  if (!j.contains("hull") || !j["hull"].is_object())
    throw InvalidInputError("system definition needs a \"hull\" ball");
  Vec center = vec_from_json(j["hull"].at("center"));
  if (center.size() != dim) throw InvalidInputError("hull center dimension mismatch");
  if (!j["hull"].contains("radius") || !j["hull"]["radius"].is_number())
    throw InvalidInputError("hull needs a numeric radius");
  double radius = j["hull"]["radius"].get<double>();
  if (!j.contains("maps") || !j["maps"].is_array() || j["maps"].size() < 2)
    throw InvalidInputError("system definition needs at least two maps");

  std::vector<ContractionMap> maps;
  for (const auto& mj : j["maps"]) {
    Mat m = mat_from_json(mj.at("matrix"), dim);
    Vec t = vec_from_json(mj.at("offset"));
    if (t.size() != dim) throw InvalidInputError("map offset dimension mismatch");
    maps.emplace_back(std::move(m), std::move(t));
  }
  std::string name = j.value("name", std::string{});
  IfsSystem system(dim, std::move(maps), HullBall{std::move(center), radius}, name);

  PropernessReport proper = verify_proper(system);
  if (!proper.pass())
    throw InvalidInputError("system rejected: " + proper.message);
  return system;
}

IfsSystem load_ifs_file(const std::string& path) { return load_ifs(read_json_file(path)); }

Json ifs_to_json(const IfsSystem& system) {
  Json j;
  j["name"] = system.name();
  j["dimension"] = system.dimension();
  j["hull"] = {{"center", vec_to_json(system.hull().center)},
               {"radius", system.hull().radius}};
  Json maps = Json::array();
  for (const auto& m : system.maps())
    maps.push_back({{"matrix", mat_to_json(m.matrix)}, {"offset", vec_to_json(m.offset)}});
  j["maps"] = std::move(maps);
  return j;
}

Region load_region(const Json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw InvalidInputError("witness region needs a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "box") return Region::box(vec_from_json(j.at("min")), vec_from_json(j.at("max")));
  if (kind == "ball")
    return Region::ball(vec_from_json(j.at("center")), j.at("radius").get<double>());
  if (kind == "polygon") {
    std::vector<Vec> verts;
    for (const auto& vj : j.at("vertices")) verts.push_back(vec_from_json(vj));
    return Region::polygon(std::move(verts));
  }
  if (kind == "union") {
    std::vector<Region> parts;
    for (const auto& pj : j.at("parts")) parts.push_back(load_region(pj));
    return Region::union_of(std::move(parts));
  }
  if (kind == "hull_interior") return Region::hull_interior();
  throw InvalidInputError("unknown region kind \"" + kind + "\"");
}

Region load_region_file(const std::string& path) { return load_region(read_json_file(path)); }

Json region_to_json(const Region& region) {
  Json j;
  switch (region.kind) {
    case Region::Kind::Box:
      j["kind"] = "box";
      j["min"] = vec_to_json(region.lo);
      j["max"] = vec_to_json(region.hi);
      break;
    case Region::Kind::Ball:
      j["kind"] = "ball";
      j["center"] = vec_to_json(region.center);
      j["radius"] = region.radius;
      break;
    case Region::Kind::Polygon: {
      j["kind"] = "polygon";
      Json verts = Json::array();
      for (const auto& v : region.vertices) verts.push_back(vec_to_json(v));
      j["vertices"] = std::move(verts);
      break;
    }
    case Region::Kind::Union: {
      j["kind"] = "union";
      Json parts = Json::array();
      for (const auto& p : region.parts) parts.push_back(region_to_json(p));
      j["parts"] = std::move(parts);
      break;
    }
    case Region::Kind::HullInterior:
      j["kind"] = "hull_interior";
      break;
  }
  return j;
}

Json branch_report_to_json(const BranchReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["depth"] = report.depth;
  j["tol"] = report.tol;
  Json pairs = Json::array();
  for (const auto& p : report.pairs) {
    Json pj;
    pj["i"] = p.i;
    pj["j"] = p.j;
    switch (p.kind) {
      case PairSolution::Kind::Empty: pj["kind"] = "empty"; break;
      case PairSolution::Kind::Points: pj["kind"] = "points"; break;
      case PairSolution::Kind::Affine: pj["kind"] = "affine"; break;
    }
    if (!p.points.empty()) {
      Json pts = Json::array();
      for (const auto& y : p.points) pts.push_back(vec_to_json(y));
      pj["preimages"] = std::move(pts);
    }
    if (p.kind == PairSolution::Kind::Affine) {
      pj["anchor"] = vec_to_json(p.anchor);
      pj["subspace_dim"] = p.subspace_dim();
      Json iv = Json::array();
      for (const auto& [a, b] : p.param_intervals) iv.push_back({a, b});
      pj["param_intervals"] = std::move(iv);
    }
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  Json pts = Json::array();
  for (const auto& rec : report.points) {
    Json r;
    r["x"] = vec_to_json(rec.x);
    r["y"] = vec_to_json(rec.y);
    r["indices"] = rec.indices;
    r["branch_index"] = rec.index();
    pts.push_back(std::move(r));
  }
  j["branch_points"] = std::move(pts);
  Json segs = Json::array();
  for (const auto& seg : report.segments) {
    Json s;
    s["i"] = seg.i;
    s["j"] = seg.j;
    s["anchor"] = vec_to_json(seg.anchor);
    s["direction"] = vec_to_json(seg.direction);
    Json iv = Json::array();
    for (const auto& [a, b] : seg.intervals) iv.push_back({a, b});
    s["intervals"] = std::move(iv);
    segs.push_back(std::move(s));
  }
  j["segments"] = std::move(segs);
  switch (report.cardinality) {
    case BranchCardinality::Empty: j["cardinality"] = "empty"; break;
    case BranchCardinality::Finite:
      j["cardinality"] = "finite";
      j["count"] = report.finite_count;
      break;
    case BranchCardinality::InfiniteAtResolution:
      j["cardinality"] = "infinite-at-resolution";
      break;
  }
  return j;
}

Json separation_report_to_json(const SeparationReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["depth"] = report.depth;
  j["tol"] = report.tol;
  j["strong"] = verdict_json(report.strong);
  j["graph"] = verdict_json(report.graph);
  Json osc;
  osc["verdict"] = verdict_name(report.open_set.verdict);
  if (report.open_set.witness) osc["violation"] = vec_to_json(*report.open_set.witness);
  if (!report.open_set.detail.empty()) osc["detail"] = report.open_set.detail;
  if (report.witness_region) osc["witness_region"] = region_to_json(*report.witness_region);
  j["open_set"] = std::move(osc);
  return j;
}

Json classification_to_json(const ClassificationReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["depth"] = report.depth;
  j["tol"] = report.tol;
  j["verdict"] = algebra_verdict_name(report.verdict);
  if (report.verdict == AlgebraVerdict::CuntzAlgebra) {
    j["cuntz_index"] = report.cuntz_n;
    j["algebra"] = "O_" + std::to_string(report.cuntz_n);
  }
  if (report.verdict == AlgebraVerdict::NotGraphSeparated) {
    j["qualitative"] = report.obstruction_tag;
    if (report.branch.cardinality == BranchCardinality::Finite) {
      j["branch_count"] = report.branch_count;
      j["dim_A_mod_IX"] = report.dim_A_mod_IX;
    }
  }
  j["separation"] = separation_report_to_json(report.separation);
  j["branch"] = branch_report_to_json(report.branch);
  if (!report.metadata.empty()) {
    Json meta;
    for (const auto& [k, v] : report.metadata) meta[k] = v;
    j["metadata"] = std::move(meta);
  }
  return j;
}

Json registry_verify_to_json(const RegistryVerifyResult& result) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["depth"] = result.depth;
  j["tol"] = result.tol;
  j["pass"] = result.pass;
  j["seconds"] = result.seconds;
  Json rows = Json::array();
  for (const auto& row : result.rows) {
    Json r;
    r["name"] = row.name;
    r["pass"] = row.pass;
    if (!row.deltas.empty()) r["deltas"] = row.deltas;
    r["seconds"] = row.seconds;
    r["verdict"] = algebra_verdict_name(row.report.verdict);
    if (row.report.verdict == AlgebraVerdict::CuntzAlgebra)
      r["algebra"] = "O_" + std::to_string(row.report.cuntz_n);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json registry_to_json() {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json entries = Json::array();
  for (const auto& e : builtin_registry()) {
    Json ej;
    ej["name"] = e.name;
    ej["description"] = e.description;
    ej["system"] = ifs_to_json(e.system);
    if (e.osc_witness) ej["osc_witness"] = region_to_json(*e.osc_witness);
    ej["grid_depth"] = e.grid_depth;
    ej["expected"] = {{"strong", verdict_name(e.expect_strong)},
                      {"graph", verdict_name(e.expect_graph)},
                      {"open_set", verdict_name(e.expect_osc)},
                      {"verdict", algebra_verdict_name(e.expect_verdict)}};
    if (e.expect_verdict == AlgebraVerdict::CuntzAlgebra)
      ej["expected"]["cuntz_index"] = e.expect_cuntz_n;
    Json meta;
    for (const auto& [k, v] : e.metadata) meta[k] = v;
    ej["metadata"] = std::move(meta);
    entries.push_back(std::move(ej));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json sampled_function_to_json(const SampledFunction& f) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["system_hash"] = f.grid().system().content_hash();
  j["grid_depth"] = f.grid().depth();
  Json vals = Json::array();
  for (std::uint64_t u = 0; u < f.size(); ++u)
    vals.push_back({f.at(u).real(), f.at(u).imag()});
  j["values"] = std::move(vals);
  return j;
}

Json amplify_witness_to_json(const AmplifyWitness& w) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tensor_depth"] = w.tensor_depth;
  j["locator_word"] = w.locator.symbols;
  j["peak"] = vec_to_json(w.peak);
  j["norm_a"] = w.norm_a;
  j["plateau_radius"] = w.rho0;
  j["attained_min"] = w.attained_min;
  j["attained_max"] = w.attained_max;
  return j;
}

Json separating_function_to_json(const SeparatingFunction& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["locator_word"] = s.locator.symbols;
  j["full_word"] = s.full_word.symbols;
  j["bump_center"] = vec_to_json(s.bump_center);
  j["bump_halfwidth"] = s.bump_halfwidth;
  j["operator_norm"] = s.norm_T;
  j["attained"] = s.attained;
  j["invariance_depth"] = s.a.depth;
  j["invariance_spread"] = s.a.worst_spread;
  return j;
}

Json compact_approx_to_json(const CompactApproxResult& r, int probe_count) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["ok"] = r.ok;
  j["partition_depth"] = r.partition_depth;
  j["patch_count"] = r.patch_count;
  j["rank"] = r.op.pairs.size();
  j["residual"] = r.residual;
  if (!r.ok) j["probe_lower_bound"] = r.probe_lower_bound;
  j["probes"] = {{"proof_probes", "branch and single-sheet bumps per branch point"},
                 {"random_probes", probe_count}};
  j["detail"] = r.detail;
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InvalidInputError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

}  // namespace selfsim
