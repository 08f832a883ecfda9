#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "selfsim/classify.hpp"
#include "selfsim/registry.hpp"
#include "selfsim/transfer.hpp"

namespace selfsim {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// IFS definition file:
/// {"name": .., "dimension": d, "hull": {"center": [..], "radius": r},
///  "maps": [{"matrix": [[..],..], "offset": [..]}, ...]}  (row-major).
/// Rejected with a diagnostic when properness or hull invariance fails.
IfsSystem load_ifs(const Json& j);
IfsSystem load_ifs_file(const std::string& path);
Json ifs_to_json(const IfsSystem& system);

/// Witness region file: {"kind": "box"|"ball"|"polygon"|"union"|"hull_interior", ...}.
Region load_region(const Json& j);
Region load_region_file(const std::string& path);
Json region_to_json(const Region& region);

Json branch_report_to_json(const BranchReport& report);
Json separation_report_to_json(const SeparationReport& report);
Json classification_to_json(const ClassificationReport& report);
Json registry_verify_to_json(const RegistryVerifyResult& result);
Json registry_to_json();  // the shipped registry.json payload

Json sampled_function_to_json(const SampledFunction& f);
Json amplify_witness_to_json(const AmplifyWitness& w);
Json separating_function_to_json(const SeparatingFunction& s);
Json compact_approx_to_json(const CompactApproxResult& r, int probe_count);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

}  // namespace selfsim
