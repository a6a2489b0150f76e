#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "flex/cli/commands.hpp"
#include "flex/cli/config.hpp"
#include "flex/errors.hpp"

namespace {

void add_common_options(CLI::App* sub, flex::cli::CommandOptions& options, std::string& out_dir) {
  sub->add_option_function<std::string>("--config", [&](const std::string& p) { options.config_path = p; },
                                        "INI config, or a manifest.json from an earlier run");
  sub->add_option("--out", out_dir, "Output directory (default: $FLEX_OUT_DIR or ./flex_out)");
  sub->add_option("--preset", options.preset, "Built-in parameter set: default|longlive");
  sub->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { options.overrides.seed = s; },
                                          "Override noise, model and verify seeds");
  sub->add_option_function<std::string>("--mode", [&](const std::string& m) { options.overrides.mode = m; },
                                        "Modulation mode: vanilla|pi|flex");
  sub->add_option_function<double>("--rho", [&](double r) { options.overrides.rho = r; },
                                   "Override the ANS correlation");
  sub->add_option_function<int>("--target-len", [&](int l) { options.overrides.target_len = l; },
                                "Override the generated length in latent frames");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexctl: rotary modulation, antiphase noise and sink-window toolkit"};
  app.require_subcommand(0, 1);

  bool print_defaults = false;
  std::string print_preset = "default";
  app.add_flag("--print-default-config", print_defaults, "Print the built-in config and exit");
  app.add_option("--print-preset", print_preset, "Preset used by --print-default-config");

  flex::cli::CommandOptions options;
  std::string out_dir;
  auto* rope = app.add_subcommand("rope-analyze", "Write per-plane frequency tables for all modes");
  auto* noise = app.add_subcommand("noise-verify", "Monte-Carlo and spectral checks of the noise sampler");
  auto* sim = app.add_subcommand("simulate", "Run the toy chunk-wise generator per mode");
  for (auto* sub : {rope, noise, sim}) add_common_options(sub, options, out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return flex::cli::kExitConfigError;
  }

  if (print_defaults) {
    try {
      std::cout << flex::cli::to_ini(flex::cli::preset_config(print_preset));
    } catch (const flex::Error& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return flex::cli::kExitConfigError;
    }
    return flex::cli::kExitOk;
  }

  options.out_dir = out_dir.empty() ? flex::cli::default_out_dir() : std::filesystem::path(out_dir);
  if (rope->parsed()) return flex::cli::cmd_rope_analyze(options, std::cout, std::cerr);
  if (noise->parsed()) return flex::cli::cmd_noise_verify(options, std::cout, std::cerr);
  if (sim->parsed()) return flex::cli::cmd_simulate(options, std::cout, std::cerr);

  std::cerr << app.help();
  return flex::cli::kExitConfigError;
}
