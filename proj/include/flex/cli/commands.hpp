#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "flex/cli/config.hpp"

namespace flex::cli {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

struct CommandOptions {
  std::optional<std::filesystem::path> config_path;
  std::string preset = "default";
  std::filesystem::path out_dir;
  Overrides overrides;
};

// Output directory when --out is absent: $FLEX_OUT_DIR, else "flex_out".
std::filesystem::path default_out_dir();

// Each command writes its outputs plus manifest.json into out_dir and returns
// an ExitCode. Errors are reported on `err`, progress on `out`.
int cmd_rope_analyze(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_noise_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace flex::cli
