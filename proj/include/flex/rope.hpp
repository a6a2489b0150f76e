#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace flex {

// Temporal rotary configuration. The toy treats the whole head dimension as
// the temporal subspace, so `dim` doubles as the attention head size.
struct RopeSpec {
  int dim = 16;            // even; dim / 2 rotary planes
  double base = 10000.0;
  int train_len = 21;      // training horizon in latent frames
  double alpha = 0.1;      // exposure below which a plane is fully interpolated
  double beta = 2.5;       // exposure above which a plane is left untouched

  int planes() const { return dim / 2; }

  // Throws ConfigError on odd/non-positive dim, base <= 1, train_len < 1,
  // alpha < 0 or alpha >= beta.
  void validate() const;
};

enum class ModulationMode { Vanilla, PositionInterpolation, FlexNtkByParts };

std::string_view to_string(ModulationMode mode);
// Accepts "vanilla", "pi", "flex". Throws ConfigError otherwise.
ModulationMode parse_mode(std::string_view name);

// theta_m = base^(-2m/dim), m in [0, dim/2).
std::vector<double> plane_frequencies(const RopeSpec& spec);

struct Exposure {
  double wavelength;  // frames per full 2*pi turn
  double cycles;      // full turns completed within train_len
};
std::vector<Exposure> exposure_table(const RopeSpec& spec);

// Piecewise-linear ramp: 0 at or below alpha, 1 at or above beta.
double gate(double exposure, double alpha, double beta);

// S = max(1, target_len / train_len).
double dynamic_scale(int target_len, int train_len);

struct ModulatedFrequencies {
  double scale = 1.0;
  std::vector<double> theta;
};
// h(theta) = (1 - g) * theta / S + g * theta. Returns the base table
// unchanged when S == 1.
ModulatedFrequencies modulated_frequencies(const RopeSpec& spec, int target_len);

struct PlaneRow {
  int m;
  double theta;
  double wavelength;
  double exposure;
  double gate;
  double theta_mod;
};

struct PlaneTable {
  double scale = 1.0;
  std::vector<PlaneRow> rows;
};
PlaneTable plane_table(const RopeSpec& spec, int target_len);

// Position fed to the rotation: n / S under PI, n otherwise.
double position_map(ModulationMode mode, std::int64_t n, double scale);

// Precomputed per-run rotary state: effective frequencies for one mode and
// target length, plus cos/sin tables for positions [0, target_len).
class RotaryEmbedding {
 public:
  // With precompute = false angles are evaluated on demand.
  RotaryEmbedding(const RopeSpec& spec, ModulationMode mode, int target_len,
                  bool precompute = true);

  ModulationMode mode() const { return mode_; }
  double scale() const { return scale_; }
  int dim() const { return dim_; }
  std::span<const double> base_frequencies() const { return base_; }
  // theta under Vanilla/PI, h(theta) under Flex.
  std::span<const double> effective_frequencies() const { return effective_; }

  double angle(std::int64_t n, int plane) const;

  void rotate(std::span<double> vec, std::int64_t n) const;
  void rotate(std::span<float> vec, std::int64_t n) const;

 private:
  void cos_sin(std::int64_t n, int plane, double& c, double& s) const;

  ModulationMode mode_;
  int dim_;
  int cached_positions_;
  double scale_;
  std::vector<double> base_;
  std::vector<double> effective_;
  std::vector<double> cos_table_;  // [position][plane]
  std::vector<double> sin_table_;
};

std::vector<double> apply_rotary(std::span<const double> vec, const RopeSpec& spec,
                                 ModulationMode mode, std::int64_t n, int target_len);

// <R(n_q) q, R(n_k) k>.
double relative_logit(std::span<const double> q, std::span<const double> k, std::int64_t n_q,
                      std::int64_t n_k, const RopeSpec& spec, ModulationMode mode,
                      int target_len);

// Adjacent-frame phase increment angle(1) - angle(0) for each plane.
std::vector<double> phase_step_report(const RopeSpec& spec, ModulationMode mode, int target_len);

}  // namespace flex
