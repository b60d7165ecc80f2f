// manifest.hpp -- reproducibility manifest for batch CLI runs.

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace phasespace {

inline const char* tool_version() { return "0.1.0"; }

// FNV-1a 64-bit checksum of a file's bytes, rendered as "fnv1a64:<hex>".
std::string file_checksum(const std::string& path);

struct RunManifest {
  std::string command;
  nlohmann::json parameters;
  std::vector<std::pair<std::string, std::string>> artifacts;  // (path, checksum)
  double wall_time_ms = 0.0;

  void add_artifact(const std::string& path);
  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

}  // namespace phasespace
