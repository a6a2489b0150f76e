#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "flex/exec.hpp"
#include "flex/matrix.hpp"

namespace flex {

struct PsdCurve {
  std::vector<double> omegas;  // ascending, in [0, pi]
  std::vector<double> values;
};

// AR(1) power spectral density (1 - rho^2) / (1 + rho^2 - 2 rho cos w).
// Requires |rho| < 1 and |omega| <= pi; throws DomainError otherwise.
double analytic_psd(double rho, double omega);

struct PsdEndpoints {
  double at_zero;  // (1 + rho) / (1 - rho)
  double at_pi;    // (1 - rho) / (1 + rho)
};
PsdEndpoints psd_endpoints(double rho);

// |H(w)|^2 = 2 (1 - cos w) for the adjacent-difference filter H(w) = 1 - e^{-iw}.
double highpass_response(double omega);

// |H(w)|^2 * S_rho(w).
double motion_energy_density(double rho, double omega);

// (1 / 2pi) * integral over [-pi, pi] of fn, by the composite trapezoid rule on
// `intervals` uniform intervals. The integrand is treated as 2pi-periodic, so
// the shared endpoint is evaluated once.
double periodic_mean(const std::function<double(double)>& fn, std::size_t intervals);

inline constexpr std::size_t kMinQuadraturePoints = 64;

// Expected adjacent-difference energy per dimension, (1/2pi) int |H|^2 S_rho.
// Equals 2 (1 - rho).
double parseval_energy(double rho, std::size_t quadrature_points = 1024);

// (1/2pi) int S_rho. Equals 1 (unit marginal variance).
double mean_power(double rho, std::size_t quadrature_points = 1024);

inline constexpr std::size_t kMinSegment = 16;

// Averaged rectangular-window periodogram over non-overlapping segments and
// over the d columns of `series`, normalized so white unit-variance noise
// converges to 1. Bins are omega_k = 2 pi k / segment_len, k = 0 .. N/2.
PsdCurve periodogram(const MatrixD& series, std::size_t segment_len, Exec exec = Exec::Parallel);

// sqrt(sum (emp - S_rho)^2 / sum S_rho^2) over the curve's bins.
double psd_relative_l2_error(const PsdCurve& curve, double rho);

}  // namespace flex
