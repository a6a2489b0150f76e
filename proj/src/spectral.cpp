#include "flex/spectral.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "flex/errors.hpp"
#include "flex/kernels.hpp"

namespace flex {

namespace {

constexpr double kPi = std::numbers::pi;

void check_open_rho(double rho) {
  if (!std::isfinite(rho) || std::abs(rho) >= 1.0)
    throw DomainError("AR(1) spectrum has a pole at |rho| = 1 (omega = " +
                      std::string(rho > 0 ? "0" : "pi") + "); got rho = " + std::to_string(rho));
}

}  // namespace

double analytic_psd(double rho, double omega) {
  check_open_rho(rho);
  if (!(std::abs(omega) <= kPi)) throw DomainError("analytic_psd: omega outside [-pi, pi]");
  return (1.0 - rho * rho) / (1.0 + rho * rho - 2.0 * rho * std::cos(omega));
}

PsdEndpoints psd_endpoints(double rho) {
  check_open_rho(rho);
  return {(1.0 + rho) / (1.0 - rho), (1.0 - rho) / (1.0 + rho)};
}

double highpass_response(double omega) { return 2.0 * (1.0 - std::cos(omega)); }

double motion_energy_density(double rho, double omega) {
  return highpass_response(omega) * analytic_psd(rho, omega);
}

double periodic_mean(const std::function<double(double)>& fn, std::size_t intervals) {
  if (intervals == 0) throw UsageError("periodic_mean: need at least one interval");
  const double h = 2.0 * kPi / static_cast<double>(intervals);
  double sum = 0.0;
  for (std::size_t i = 0; i < intervals; ++i) sum += fn(-kPi + h * static_cast<double>(i));
  return sum / static_cast<double>(intervals);
}

double parseval_energy(double rho, std::size_t quadrature_points) {
  check_open_rho(rho);
  if (quadrature_points < kMinQuadraturePoints)
    throw UsageError("parseval_energy: need at least 64 quadrature points");
  return periodic_mean([rho](double w) { return motion_energy_density(rho, w); },
                       quadrature_points);
}

double mean_power(double rho, std::size_t quadrature_points) {
  check_open_rho(rho);
  if (quadrature_points < kMinQuadraturePoints)
    throw UsageError("mean_power: need at least 64 quadrature points");
  return periodic_mean([rho](double w) { return analytic_psd(rho, w); }, quadrature_points);
}

PsdCurve periodogram(const MatrixD& series, std::size_t segment_len, Exec exec) {
  if (segment_len < kMinSegment || !std::has_single_bit(segment_len))
    throw UsageError("periodogram: segment length must be a power of two >= 16");
  if (series.rows() < segment_len || series.cols() == 0)
    throw UsageError("periodogram: series shorter than one segment (" +
                     std::to_string(series.rows()) + " < " + std::to_string(segment_len) + ")");
  auto spectrum = exec == Exec::Serial ? kernels::serial::periodogram(series, segment_len)
                                       : kernels::omp::periodogram(series, segment_len);
  return {std::move(spectrum.omegas), std::move(spectrum.power)};
}

double psd_relative_l2_error(const PsdCurve& curve, double rho) {
  if (curve.omegas.size() != curve.values.size() || curve.omegas.empty())
    throw ShapeError("psd_relative_l2_error: malformed curve");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < curve.omegas.size(); ++i) {
    const double s = analytic_psd(rho, curve.omegas[i]);
    num += (curve.values[i] - s) * (curve.values[i] - s);
    den += s * s;
  }
  return std::sqrt(num / den);
}

}  // namespace flex
