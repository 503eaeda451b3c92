#include "manifest.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "plateau/errors.hpp"
#include "plateau/version.hpp"
#include "sha256.hpp"

namespace tool {

std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_manifest(const std::string& primary_output,
                    const RunManifest& manifest) {
  nlohmann::json doc;
  doc["command"] = manifest.command_line;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& kv : manifest.config) cfg[kv.first] = kv.second;
  doc["config"] = cfg;
  if (manifest.has_seed) doc["seed"] = manifest.seed;
  doc["version"] = plateau::kVersion;
  doc["started_at"] = manifest.started_at;
  doc["finished_at"] = manifest.finished_at;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& path : manifest.output_paths) {
    nlohmann::json entry;
    entry["path"] = path;
    entry["sha256"] = sha256_file_hex(path);
    entry["bytes"] = std::filesystem::file_size(path);
    outs.push_back(entry);
  }
  doc["outputs"] = outs;

  const std::string path = primary_output + ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw plateau::DomainError("manifest: cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace tool
