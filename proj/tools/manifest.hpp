#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tool {

// One manifest per experiment that writes files: command line, resolved
// parameters, seed, version, wall-clock timestamps, digests of every
// emitted file. Written next to the primary output as
// <out>.manifest.json.
struct RunManifest {
  std::string command_line;
  std::vector<std::pair<std::string, std::string>> config;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> output_paths;
};

std::string utc_now_iso8601();
void write_manifest(const std::string& primary_output,
                    const RunManifest& manifest);

}  // namespace tool
