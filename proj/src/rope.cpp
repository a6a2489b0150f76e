#include "flex/rope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "flex/errors.hpp"

namespace flex {

void RopeSpec::validate() const {
  if (dim < 2 || dim % 2 != 0)
    throw ConfigError("rope: dim must be even and >= 2, got " + std::to_string(dim));
  if (!(base > 1.0)) throw ConfigError("rope: base must be > 1");
  if (train_len < 1) throw ConfigError("rope: train_len must be >= 1");
  if (!(alpha >= 0.0)) throw ConfigError("rope: alpha must be >= 0");
  if (!(alpha < beta)) throw ConfigError("rope: alpha must be < beta");
}

std::string_view to_string(ModulationMode mode) {
  switch (mode) {
    case ModulationMode::Vanilla:
      return "vanilla";
    case ModulationMode::PositionInterpolation:
      return "pi";
    case ModulationMode::FlexNtkByParts:
      return "flex";
  }
  return "unknown";
}

ModulationMode parse_mode(std::string_view name) {
  if (name == "vanilla") return ModulationMode::Vanilla;
  if (name == "pi") return ModulationMode::PositionInterpolation;
  if (name == "flex") return ModulationMode::FlexNtkByParts;
  throw ConfigError("unknown modulation mode '" + std::string(name) +
                    "' (expected vanilla|pi|flex)");
}

std::vector<double> plane_frequencies(const RopeSpec& spec) {
  spec.validate();
  std::vector<double> theta(spec.planes());
  for (int m = 0; m < spec.planes(); ++m)
    theta[m] = std::pow(spec.base, -2.0 * m / spec.dim);
  return theta;
}

std::vector<Exposure> exposure_table(const RopeSpec& spec) {
  const auto theta = plane_frequencies(spec);
  std::vector<Exposure> out;
  out.reserve(theta.size());
  for (double t : theta) {
    const double wavelength = 2.0 * std::numbers::pi / t;
    out.push_back({wavelength, spec.train_len / wavelength});
  }
  return out;
}

double gate(double exposure, double alpha, double beta) {
  if (!(alpha < beta)) throw ConfigError("gate: alpha must be < beta");
  if (exposure <= alpha) return 0.0;
  if (exposure >= beta) return 1.0;
  return (exposure - alpha) / (beta - alpha);
}

double dynamic_scale(int target_len, int train_len) {
  if (target_len < 1) throw ConfigError("target length must be >= 1");
  if (train_len < 1) throw ConfigError("train_len must be >= 1");
  return std::max(1.0, static_cast<double>(target_len) / train_len);
}

ModulatedFrequencies modulated_frequencies(const RopeSpec& spec, int target_len) {
  ModulatedFrequencies out;
  out.scale = dynamic_scale(target_len, spec.train_len);
  out.theta = plane_frequencies(spec);
  if (out.scale == 1.0) return out;

  const auto exposure = exposure_table(spec);
  for (std::size_t m = 0; m < out.theta.size(); ++m) {
    const double theta = out.theta[m];
    const double g = gate(exposure[m].cycles, spec.alpha, spec.beta);
    const double lo = theta / out.scale;
    const double mixed = (1.0 - g) * lo + g * theta;
    out.theta[m] = std::clamp(mixed, lo, theta);
  }
  return out;
}

PlaneTable plane_table(const RopeSpec& spec, int target_len) {
  const auto theta = plane_frequencies(spec);
  const auto exposure = exposure_table(spec);
  const auto modulated = modulated_frequencies(spec, target_len);
  PlaneTable table;
  table.scale = modulated.scale;
  for (int m = 0; m < spec.planes(); ++m) {
    table.rows.push_back({m, theta[m], exposure[m].wavelength, exposure[m].cycles,
                          gate(exposure[m].cycles, spec.alpha, spec.beta), modulated.theta[m]});
  }
  return table;
}

double position_map(ModulationMode mode, std::int64_t n, double scale) {
  if (mode == ModulationMode::PositionInterpolation) return static_cast<double>(n) / scale;
  return static_cast<double>(n);
}

RotaryEmbedding::RotaryEmbedding(const RopeSpec& spec, ModulationMode mode, int target_len,
                                 bool precompute)
    : mode_(mode), dim_(spec.dim), cached_positions_(precompute ? target_len : 0) {
  const auto modulated = modulated_frequencies(spec, target_len);
  scale_ = modulated.scale;
  base_ = plane_frequencies(spec);
  effective_ = mode == ModulationMode::FlexNtkByParts ? modulated.theta : base_;

  const int planes = spec.planes();
  cos_table_.resize(static_cast<std::size_t>(cached_positions_) * planes);
  sin_table_.resize(cos_table_.size());
  for (int n = 0; n < cached_positions_; ++n) {
    for (int m = 0; m < planes; ++m) {
      const double a = angle(n, m);
      cos_table_[static_cast<std::size_t>(n) * planes + m] = std::cos(a);
      sin_table_[static_cast<std::size_t>(n) * planes + m] = std::sin(a);
    }
  }
}

double RotaryEmbedding::angle(std::int64_t n, int plane) const {
  // PI divides after multiplying so that the unit step is exactly theta / S.
  if (mode_ == ModulationMode::PositionInterpolation)
    return static_cast<double>(n) * base_[plane] / scale_;
  return static_cast<double>(n) * effective_[plane];
}

void RotaryEmbedding::cos_sin(std::int64_t n, int plane, double& c, double& s) const {
  if (n >= 0 && n < cached_positions_) {
    const std::size_t idx = static_cast<std::size_t>(n) * (dim_ / 2) + plane;
    c = cos_table_[idx];
    s = sin_table_[idx];
    return;
  }
  const double a = angle(n, plane);
  c = std::cos(a);
  s = std::sin(a);
}

void RotaryEmbedding::rotate(std::span<double> vec, std::int64_t n) const {
  if (static_cast<int>(vec.size()) != dim_) throw ShapeError("rotate: vector length != dim");
  for (int m = 0; m < dim_ / 2; ++m) {
    double c, s;
    cos_sin(n, m, c, s);
    const double x = vec[2 * m];
    const double y = vec[2 * m + 1];
    vec[2 * m] = c * x - s * y;
    vec[2 * m + 1] = s * x + c * y;
  }
}

void RotaryEmbedding::rotate(std::span<float> vec, std::int64_t n) const {
  if (static_cast<int>(vec.size()) != dim_) throw ShapeError("rotate: vector length != dim");
  for (int m = 0; m < dim_ / 2; ++m) {
    double cd, sd;
    cos_sin(n, m, cd, sd);
    const float c = static_cast<float>(cd);
    const float s = static_cast<float>(sd);
    const float x = vec[2 * m];
    const float y = vec[2 * m + 1];
    vec[2 * m] = c * x - s * y;
    vec[2 * m + 1] = s * x + c * y;
  }
}

std::vector<double> apply_rotary(std::span<const double> vec, const RopeSpec& spec,
                                 ModulationMode mode, std::int64_t n, int target_len) {
  if (static_cast<int>(vec.size()) != spec.dim)
    throw ShapeError("apply_rotary: vector length != dim");
  const RotaryEmbedding rope(spec, mode, target_len, false);
  std::vector<double> out(vec.begin(), vec.end());
  rope.rotate(out, n);
  return out;
}

double relative_logit(std::span<const double> q, std::span<const double> k, std::int64_t n_q,
                      std::int64_t n_k, const RopeSpec& spec, ModulationMode mode,
                      int target_len) {
  if (static_cast<int>(q.size()) != spec.dim || static_cast<int>(k.size()) != spec.dim)
    throw ShapeError("relative_logit: q and k must have length dim");
  const RotaryEmbedding rope(spec, mode, target_len, false);
  std::vector<double> rq(q.begin(), q.end());
  std::vector<double> rk(k.begin(), k.end());
  rope.rotate(rq, n_q);
  rope.rotate(rk, n_k);
  double dot = 0.0;
  for (std::size_t i = 0; i < rq.size(); ++i) dot += rq[i] * rk[i];
  return dot;
}

std::vector<double> phase_step_report(const RopeSpec& spec, ModulationMode mode, int target_len) {
  const RotaryEmbedding rope(spec, mode, target_len, false);
  std::vector<double> steps(spec.planes());
  for (int m = 0; m < spec.planes(); ++m) steps[m] = rope.angle(1, m) - rope.angle(0, m);
  return steps;
}

}  // namespace flex
