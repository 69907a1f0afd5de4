#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace awopt::config {

inline constexpr const char* kVersionString = "awopt-0.1.0";

// Everything needed to re-execute a run bit-identically: the resolved config
// tree, its canonical hash, the seed list and the library version.
struct RunManifest {
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  std::string version = kVersionString;
  std::string started_at;
  std::string finished_at;
  nlohmann::json resolved_config;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

std::string timestamp_utc_now();

}  // namespace awopt::config
