#include "revmine/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "revmine/errors.hpp"
#include "revmine/report.hpp"

namespace revmine {

std::string utc_timestamp_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  return {{"config", config},
          {"tool_version", tool_version},
          {"corpus_sha256", corpus_sha256},
          {"seeds", seeds},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"output_paths", output_paths}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.config = j.at("config");
  m.tool_version = j.at("tool_version");
  m.corpus_sha256 = j.at("corpus_sha256");
  m.seeds = j.at("seeds").get<std::vector<uint64_t>>();
  m.started_at = j.value("started_at", "");
  m.finished_at = j.value("finished_at", "");
  m.output_paths = j.value("output_paths", std::vector<std::string>{});
  return m;
}

void RunManifest::write(const std::filesystem::path& path) const {
  write_json_file(to_json(), path);
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

}  // namespace revmine
