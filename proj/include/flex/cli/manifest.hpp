#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "flex/cli/config.hpp"

namespace flex::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string command;
  AppConfig config;
  std::string timestamp;  // UTC, ISO 8601
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
};

nlohmann::json config_to_json(const AppConfig& config);

std::string utc_timestamp();

// Writes `manifest.json` into out_dir.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir);

}  // namespace flex::cli
