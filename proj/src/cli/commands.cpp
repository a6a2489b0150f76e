#include "flex/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>

#include "flex/cli/manifest.hpp"
#include "flex/errors.hpp"
#include "flex/metrics.hpp"
#include "flex/noise.hpp"
#include "flex/rope.hpp"
#include "flex/spectral.hpp"
#include "flex/toymodel.hpp"

namespace flex::cli {

namespace {

// Streams used by noise-verify for the long spectral series; Monte-Carlo
// chunks occupy streams [0, chunks).
constexpr std::uint64_t kSeriesStreamBase = 1ULL << 40;

// Tracks every file a command writes so the manifest can list them.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
      throw IoError("cannot create output directory " + dir_.string());
  }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
    files_.push_back(name);
    return out;
  }

  void finish(std::ofstream& out) {
    out.flush();
    if (!out) throw IoError("write failed in " + dir_.string());
  }

  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

AppConfig resolve_config(const CommandOptions& options) {
  AppConfig config = preset_config(options.preset);
  if (options.config_path) config = load_config(*options.config_path, config);
  apply_overrides(config, options.overrides);
  return config;
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

void finish_run(const std::string& command, const AppConfig& config, OutputSet& outputs) {
  RunManifest manifest{command, config, utc_timestamp(), outputs.files()};
  write_manifest(manifest, outputs.dir());
}

void write_plane_table(OutputSet& outputs, const RopeSpec& spec, ModulationMode mode,
                       int target_len) {
  const auto table = plane_table(spec, target_len);
  const auto steps = phase_step_report(spec, mode, target_len);
  auto out = outputs.open("plane_table_" + std::string(to_string(mode)) + ".csv");
  out << "m,theta,lambda,exposure_r,gate_g,theta_mod,phase_step\n";
  for (const auto& row : table.rows)
    out << row.m << ',' << format_number(row.theta) << ',' << format_number(row.wavelength) << ','
        << format_number(row.exposure) << ',' << format_number(row.gate) << ','
        << format_number(row.theta_mod) << ',' << format_number(steps[row.m]) << '\n';
  outputs.finish(out);
}

std::string rho_tag(double rho) { return "rho_" + format_number(rho); }

struct Check {
  std::string name;
  double measured;
  double threshold;
  bool pass;
};

}  // namespace

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("FLEX_OUT_DIR"); env && *env) return env;
  return "flex_out";
}

int cmd_rope_analyze(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const AppConfig config = resolve_config(options);
    OutputSet outputs(options.out_dir);
    const auto& p = config.pipeline;
    for (auto mode : {ModulationMode::Vanilla, ModulationMode::PositionInterpolation,
                      ModulationMode::FlexNtkByParts})
      write_plane_table(outputs, p.rope, mode, p.target_len);
    finish_run("rope-analyze", config, outputs);
    out << "rope-analyze: " << p.rope.planes() << " planes, S = "
        << format_number(dynamic_scale(p.target_len, p.rope.train_len)) << ", wrote "
        << outputs.files().size() << " tables to " << outputs.dir().string() << '\n';
    return int{kExitOk};
  });
}

int cmd_noise_verify(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const AppConfig config = resolve_config(options);
    const auto& v = config.verify;
    OutputSet outputs(options.out_dir);
    std::vector<Check> checks;
    auto add = [&](std::string name, double measured, double threshold) {
      checks.push_back({std::move(name), measured, threshold, measured <= threshold});
    };

    // Energy law, marginals and monotonicity.
    auto grid = v.rho_grid;
    std::sort(grid.begin(), grid.end());
    auto energy_csv = outputs.open("energy.csv");
    energy_csv << "rho,empirical,analytic\n";
    double previous = 0.0;
    double worst_rise = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const AnsParams params{grid[i], v.energy_frames, v.energy_dim, v.seed};
      const auto stats = monte_carlo_stats(params, v.chunks);
      const double analytic = analytic_energy(params);
      energy_csv << format_number(grid[i]) << ',' << format_number(stats.energy) << ','
                 << format_number(analytic) << '\n';
      add("energy_law[" + rho_tag(grid[i]) + "]",
          std::abs(stats.energy - analytic) / std::max(analytic, 1.0), v.energy_rel_tol);

      double mean_err = 0.0;
      double var_err = 0.0;
      for (double m : stats.mean.values()) mean_err = std::max(mean_err, std::abs(m));
      for (double s : stats.variance.values()) var_err = std::max(var_err, std::abs(s - 1.0));
      add("marginal_mean[" + rho_tag(grid[i]) + "]", mean_err, v.mean_abs_tol);
      add("marginal_var[" + rho_tag(grid[i]) + "]", var_err, v.var_tol);

      if (i > 0) worst_rise = std::max(worst_rise, (stats.energy - previous) / std::max(previous, 1.0));
      previous = stats.energy;
    }
    outputs.finish(energy_csv);
    add("energy_nonincreasing", worst_rise, v.energy_rel_tol);

    // Toeplitz covariance.
    for (double rho : v.cov_rho_grid) {
      const AnsParams params{rho, v.cov_frames, v.cov_dim, v.seed};
      const auto stats = monte_carlo_stats(params, v.chunks);
      const auto analytic = analytic_covariance(params);
      auto csv = outputs.open("covariance_" + rho_tag(rho) + ".csv");
      csv << "u,v,empirical,analytic\n";
      double worst = 0.0;
      for (int a = 0; a < v.cov_frames; ++a)
        for (int b = 0; b < v.cov_frames; ++b) {
          csv << a << ',' << b << ',' << format_number(stats.covariance(a, b)) << ','
              << format_number(analytic(a, b)) << '\n';
          worst = std::max(worst, std::abs(stats.covariance(a, b) - analytic(a, b)));
        }
      outputs.finish(csv);
      add("toeplitz_cov[" + rho_tag(rho) + "]", worst, v.cov_abs_tol);
    }

    // Spectrum.
    for (std::size_t i = 0; i < v.psd_rho_grid.size(); ++i) {
      const double rho = v.psd_rho_grid[i];
      RngStream rng(v.seed, kSeriesStreamBase + i);
      const auto series = sample_series(rho, v.psd_length, v.psd_dim, rng);
      const auto curve = periodogram(series, v.psd_segment);
      auto csv = outputs.open("psd_" + rho_tag(rho) + ".csv");
      csv << "omega,analytic,empirical\n";
      for (std::size_t k = 0; k < curve.omegas.size(); ++k)
        csv << format_number(curve.omegas[k]) << ','
            << format_number(analytic_psd(rho, curve.omegas[k])) << ','
            << format_number(curve.values[k]) << '\n';
      outputs.finish(csv);
      add("psd_rel_l2[" + rho_tag(rho) + "]", psd_relative_l2_error(curve, rho), v.psd_rel_l2_tol);

      const auto ends = psd_endpoints(rho);
      const double end_err = std::max(std::abs(ends.at_zero - analytic_psd(rho, 0.0)),
                                      std::abs(ends.at_pi - analytic_psd(rho, std::numbers::pi)));
      add("psd_endpoints[" + rho_tag(rho) + "]", end_err, v.endpoint_tol);
    }

    // Parseval tie-out against the closed-form energy.
    for (double rho : v.parseval_rho_grid) {
      const double per_dim = parseval_energy(rho, v.quadrature_points);
      add("parseval[" + rho_tag(rho) + "]", std::abs(per_dim - 2.0 * (1.0 - rho)), v.parseval_tol);
      const AnsParams params{rho, v.energy_frames, v.energy_dim, v.seed};
      const double closed = analytic_energy(params);
      add("parseval_vs_energy[" + rho_tag(rho) + "]",
          std::abs(per_dim * v.energy_dim * (v.energy_frames - 1) - closed) / closed, v.parseval_tol);
      add("mean_power[" + rho_tag(rho) + "]",
          std::abs(mean_power(rho, v.quadrature_points) - 1.0), v.parseval_tol);
    }

    // A few raw chunks at the configured rho, for inspection.
    {
      const auto& ans = config.pipeline.ans;
      auto csv = outputs.open("noise_chunks.csv");
      csv << "chunk,u";
      for (int j = 0; j < ans.dim; ++j) csv << ",dim" << j;
      csv << '\n';
      for (std::uint64_t k = 0; k < 4; ++k) {
        const auto chunk = sample_chunk(ans, k);
        for (int u = 0; u < ans.frames; ++u) {
          csv << k << ',' << u;
          for (int j = 0; j < ans.dim; ++j) csv << ',' << format_number(chunk(u, j));
          csv << '\n';
        }
      }
      outputs.finish(csv);
    }

    auto report = outputs.open("verify_report.csv");
    report << "check,measured,threshold,pass\n";
    std::size_t failures = 0;
    for (const auto& c : checks) {
      report << c.name << ',' << format_number(c.measured) << ',' << format_number(c.threshold)
             << ',' << (c.pass ? "pass" : "FAIL") << '\n';
      if (!c.pass) {
        ++failures;
        err << "FAIL " << c.name << ": measured " << format_number(c.measured) << " > "
            << format_number(c.threshold) << '\n';
      }
    }
    outputs.finish(report);
    finish_run("noise-verify", config, outputs);
    out << "noise-verify: " << checks.size() - failures << "/" << checks.size()
        << " checks passed\n";
    return failures ? int{kExitVerificationFailed} : int{kExitOk};
  });
}

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const AppConfig config = resolve_config(options);
    OutputSet outputs(options.out_dir);
    const auto& base = config.pipeline;
    const std::size_t chunk = static_cast<std::size_t>(base.chunk());

    auto comparison = outputs.open("comparison.csv");
    comparison << "mode,scale_S,adjacent_energy,mean_drift,noise_energy_per_chunk,"
                  "phase_step_ratio_min,phase_step_ratio_max\n";

    for (auto mode : config.modes) {
      PipelineConfig cfg = base;
      cfg.mode = mode;
      const auto trace = generate(cfg);
      const std::string tag(to_string(mode));

      auto frames = outputs.open("trace_" + tag + ".csv");
      frames << 'n';
      for (std::size_t j = 0; j < trace.frames.cols(); ++j) frames << ",dim" << j;
      frames << '\n';
      for (std::size_t n = 0; n < trace.frames.rows(); ++n) {
        frames << n;
        for (float x : trace.frames.row(n)) frames << ',' << format_number(x);
        frames << '\n';
      }
      outputs.finish(frames);

      auto metrics = outputs.open("metrics_" + tag + ".csv");
      metrics << "metric,value\n";
      for (const auto& [name, value] : trace.metrics) metrics << name << ',' << format_number(value) << '\n';
      outputs.finish(metrics);

      const auto report = evaluate_metrics(trace.frames, chunk);
      auto drift = outputs.open("drift_" + tag + ".csv");
      drift << "chunk_index,similarity\n";
      for (std::size_t c = 0; c < report.drift_curve.size(); ++c)
        drift << c << ',' << (report.drift_curve[c] ? format_number(*report.drift_curve[c]) : "nan")
              << '\n';
      outputs.finish(drift);

      auto contexts = outputs.open("contexts_" + tag + ".txt");
      contexts << "step,context_indices\n";
      for (std::size_t s = 0; s < trace.contexts.size(); ++s)
        contexts << format_context_line(s, trace.contexts[s]) << '\n';
      outputs.finish(contexts);

      const auto steps = phase_step_report(cfg.rope, mode, cfg.target_len);
      const auto theta = plane_frequencies(cfg.rope);
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t m = 0; m < theta.size(); ++m) {
        lo = std::min(lo, steps[m] / theta[m]);
        hi = std::max(hi, steps[m] / theta[m]);
      }
      comparison << tag << ',' << format_number(trace.metrics.at("scale_S")) << ','
                 << format_number(trace.metrics.at("adjacent_energy")) << ','
                 << format_number(trace.metrics.at("mean_drift")) << ','
                 << format_number(trace.metrics.at("noise_energy_per_chunk")) << ','
                 << format_number(lo) << ',' << format_number(hi) << '\n';
      out << "simulate[" << tag << "]: " << trace.frames.rows() << " frames, adjacent energy "
          << format_number(trace.metrics.at("adjacent_energy")) << '\n';
    }
    outputs.finish(comparison);

    auto phase = outputs.open("phase_steps.csv");
    phase << "m,theta,vanilla,pi,flex\n";
    const auto theta = plane_frequencies(base.rope);
    const auto van = phase_step_report(base.rope, ModulationMode::Vanilla, base.target_len);
    const auto pi = phase_step_report(base.rope, ModulationMode::PositionInterpolation, base.target_len);
    const auto flex = phase_step_report(base.rope, ModulationMode::FlexNtkByParts, base.target_len);
    for (std::size_t m = 0; m < theta.size(); ++m)
      phase << m << ',' << format_number(theta[m]) << ',' << format_number(van[m]) << ','
            << format_number(pi[m]) << ',' << format_number(flex[m]) << '\n';
    outputs.finish(phase);

    finish_run("simulate", config, outputs);
    return int{kExitOk};
  });
}

}  // namespace flex::cli
