#pragma once

#include <string>

#include "aoisched/core_types.hpp"
#include "aoisched/renewal.hpp"
#include "aoisched/sim.hpp"

#include "json.hpp"

namespace aoisched {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "aoi-sched";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

Json to_json(const Params& params);
Params params_from_json(const Json& j);

/// Sparse: only states with action SWITCH are listed (all have a = 1).
Json to_json(const TabularPolicy& policy);
TabularPolicy tabular_from_json(const Json& j);

Json to_json(const ThresholdPolicy& tp);
ThresholdPolicy threshold_from_json(const Json& j);

Json to_json(const EpochStats& st);
Json to_json(const SimReport& rep);

/// Shortest round-trip decimal form, locale-independent (std::to_chars).
std::string fmt_double(double v);

/// FNV-1a 64 of a file's bytes, as "fnv1a:<hex>"; used for input hashes in
/// run manifests.
std::string hash_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace aoisched
