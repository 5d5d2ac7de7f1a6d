#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qdep {

// Provenance record attached to every run: the subcommand, fully resolved
// configuration, seeds, input digest, produced files and tool version.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  std::string input_path;    // empty when the command reads no file
  std::string input_digest;  // fnv1a-64 hex of the raw input bytes
  std::vector<std::string> outputs;
};

// Embeddable form without timestamp or output list, so data artifacts stay
// byte-reproducible across reruns.
nlohmann::json manifest_embed_json(const RunManifest& manifest);

// Full form written to manifest.json, including the output list and a UTC
// timestamp.
nlohmann::json manifest_file_json(const RunManifest& manifest,
                                  const std::string& timestamp);

// ISO-8601 UTC wall clock; honors SOURCE_DATE_EPOCH for reproducible output.
std::string current_utc_timestamp();

}  // namespace qdep
