#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace revmine {

inline constexpr const char* kToolVersion = "0.1.0";

// Replay record written atomically before a run's results are declared valid:
// the config actually used, the hash of the corpus actually read, and every
// seed consumed.
struct RunManifest {
  nlohmann::json config;
  std::string tool_version = kToolVersion;
  std::string corpus_sha256;
  std::vector<uint64_t> seeds;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;
  std::vector<std::string> output_paths;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);

  void write(const std::filesystem::path& path) const;
  static RunManifest read(const std::filesystem::path& path);
};

std::string utc_timestamp_now();

}  // namespace revmine
