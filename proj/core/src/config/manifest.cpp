#include "awopt/config/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "awopt/errors.hpp"

namespace awopt::config {

using nlohmann::json;

json manifest_to_json(const RunManifest& m) {
  return json{{"config_hash", m.config_hash},
              {"seeds", m.seeds},
              {"out_dir", m.out_dir},
              {"version", m.version},
              {"started_at", m.started_at},
              {"finished_at", m.finished_at},
              {"config", m.resolved_config}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  m.out_dir = j.at("out_dir").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.started_at = j.at("started_at").get<std::string>();
  m.finished_at = j.at("finished_at").get<std::string>();
  m.resolved_config = j.at("config");
  return m;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw UsageError("write_manifest: cannot open " + path);
  out << manifest_to_json(manifest).dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("read_manifest: cannot open " + path);
  json j;
  in >> j;
  return manifest_from_json(j);
}

std::string timestamp_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace awopt::config
