#include "phasespace/manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace phasespace {

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_checksum: cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return out;
}

void RunManifest::add_artifact(const std::string& path) {
  artifacts.emplace_back(path, file_checksum(path));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json arts = nlohmann::json::array();
  for (const auto& [path, sum] : artifacts) arts.push_back({{"path", path}, {"checksum", sum}});
  return nlohmann::json{{"command", command},
                        {"parameters", parameters},
                        {"artifacts", arts},
                        {"tool_version", tool_version()},
                        {"wall_time_ms", wall_time_ms}};
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("manifest: cannot open " + path);
  out << to_json().dump(2) << "\n";
}

}  // namespace phasespace
