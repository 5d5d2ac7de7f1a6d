#include "qdep/manifest.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <ctime>

#include "qdep/version.hpp"

namespace qdep {

nlohmann::json manifest_embed_json(const RunManifest& manifest) {
  nlohmann::json out = nlohmann::json::object();
  out["command"] = manifest.command;
  out["config"] = manifest.config;
  out["seeds"] = manifest.seeds;
  if (!manifest.input_path.empty()) {
    out["input"] = {{"path", manifest.input_path},
                    {"fnv1a64", manifest.input_digest}};
  }
  out["tool_version"] = kToolVersion;
  return out;
}

nlohmann::json manifest_file_json(const RunManifest& manifest,
                                  const std::string& timestamp) {
  nlohmann::json out = manifest_embed_json(manifest);
  out["outputs"] = manifest.outputs;
  out["timestamp"] = timestamp;
  return out;
}

std::string current_utc_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    errno = 0;
    char* end = nullptr;
    const long long parsed = std::strtoll(epoch, &end, 10);
    if (errno == 0 && end && *end == '\0') now = static_cast<std::time_t>(parsed);
  }
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace qdep
