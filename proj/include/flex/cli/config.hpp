#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flex/toymodel.hpp"

namespace flex::cli {

// Monte-Carlo and quadrature settings for `noise-verify`, with the pass
// thresholds for every check.
struct VerifyConfig {
  std::size_t chunks = 20000;
  int energy_frames = 8;
  int energy_dim = 64;
  std::vector<double> rho_grid{-1.0, -0.8, -0.5, 0.0, 0.5, 1.0};
  int cov_frames = 4;
  int cov_dim = 64;
  std::vector<double> cov_rho_grid{-0.8, 0.0, 0.8};
  std::vector<double> psd_rho_grid{-0.8, -0.5, 0.5};
  std::size_t psd_length = 65536;
  int psd_dim = 4;
  std::size_t psd_segment = 256;
  std::vector<double> parseval_rho_grid{-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9};
  std::size_t quadrature_points = 1024;
  std::uint64_t seed = 0;

  double energy_rel_tol = 0.02;
  double cov_abs_tol = 0.03;
  double mean_abs_tol = 0.05;
  double var_tol = 0.05;
  double psd_rel_l2_tol = 0.05;
  double endpoint_tol = 1e-12;
  double parseval_tol = 1e-9;

  void validate() const;
};

struct AppConfig {
  PipelineConfig pipeline;
  std::vector<ModulationMode> modes{ModulationMode::Vanilla, ModulationMode::PositionInterpolation,
                                    ModulationMode::FlexNtkByParts};
  VerifyConfig verify;

  void validate() const;
};

// Ordered [section] -> key = value view of a config; the INI file, the
// printed defaults and the manifest snapshot are all rendered from it.
using ConfigSection = std::pair<std::string, std::vector<std::pair<std::string, std::string>>>;
std::vector<ConfigSection> to_sections(const AppConfig& config);

std::string to_ini(const AppConfig& config);

// Reads an INI config, or the "config" object of a manifest.json. Keys that
// are absent keep their value from `base`; unknown sections or keys are errors.
// Throws IoError if the file cannot be read, ConfigError if it is malformed.
AppConfig load_config(const std::filesystem::path& path, const AppConfig& base = {});

// Named parameter sets. "default" is the built-in config; "longlive" applies
// the long-horizon setting (train_len 240, alpha 1, beta 15, rho -1).
AppConfig preset_config(const std::string& name);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<double> rho;
  std::optional<int> target_len;
};
void apply_overrides(AppConfig& config, const Overrides& overrides);

// Shortest round-trip decimal form.
std::string format_number(double value);
std::string format_number(float value);

}  // namespace flex::cli
