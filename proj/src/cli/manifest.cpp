#include "flex/cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "flex/errors.hpp"
#include "flex/rng.hpp"

namespace flex::cli {

nlohmann::json config_to_json(const AppConfig& config) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [section, entries] : to_sections(config))
    for (const auto& [key, value] : entries) out[section][key] = value;
  return out;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "flexctl";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["timestamp"] = timestamp;
  j["config"] = config_to_json(config);
  j["seeds"] = {{"noise", config.pipeline.ans.seed},
                {"model", config.pipeline.model_seed},
                {"verify", config.verify.seed}};
  j["rng"] = {{"algorithm", std::string(kRngAlgorithm)}, {"normal", std::string(kNormalMethod)}};
  j["build"] = {{"compiler", __VERSION__},
                {"cplusplus", __cplusplus},
#ifdef _OPENMP
                {"openmp", _OPENMP}
#else
                {"openmp", 0}
#endif
  };
  j["outputs"] = outputs;
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir) {
  const auto path = out_dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace flex::cli
