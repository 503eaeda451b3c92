#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tool {

// Flat key=value file; '#' starts a comment; keys mirror long flag names
// without the leading dashes. Values act as defaults that command-line
// flags override.
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile load(const std::string& path);

  const std::string* find(const std::string& key) const;
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  // Every key must be in accepted; violations raise ConfigError naming
  // the accepted set.
  void validate_keys(const std::vector<std::string>& accepted) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace tool
