#include "config.hpp"

#include <algorithm>
#include <fstream>

#include "plateau/errors.hpp"

namespace tool {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw plateau::ConfigError("config: cannot open " + path);
  ConfigFile cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw plateau::ConfigError("config: line " + std::to_string(lineno) +
                                 " is not key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw plateau::ConfigError("config: line " + std::to_string(lineno) +
                                 " has an empty key or value");
    cfg.entries_.emplace_back(key, value);
  }
  return cfg;
}

const std::string* ConfigFile::find(const std::string& key) const {
  for (const auto& kv : entries_)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

void ConfigFile::validate_keys(
    const std::vector<std::string>& accepted) const {
  for (const auto& kv : entries_) {
    if (std::find(accepted.begin(), accepted.end(), kv.first) !=
        accepted.end())
      continue;
    std::string msg = "config: unknown key '" + kv.first + "'; accepted keys:";
    for (const auto& name : accepted) msg += " " + name;
    throw plateau::ConfigError(msg);
  }
}

}  // namespace tool
