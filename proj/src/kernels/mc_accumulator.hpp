#pragma once

#include <cstddef>

#include "flex/noise.hpp"

namespace flex::kernels::detail {

// Running sums for the Monte-Carlo moments of a batch of chunks.
struct McAccumulator {
  McAccumulator(std::size_t f, std::size_t d) : cross(f, f), sum(f, d), sum_sq(f, d) {}

  void add(const NoiseChunk& z) {
    const std::size_t f = z.rows();
    const std::size_t d = z.cols();
    for (std::size_t u = 1; u < f; ++u)
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = z(u, j) - z(u - 1, j);
        energy += diff * diff;
      }
    for (std::size_t u = 0; u < f; ++u)
      for (std::size_t v = u; v < f; ++v) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += z(u, j) * z(v, j);
        cross(u, v) += s;
      }
    for (std::size_t u = 0; u < f; ++u)
      for (std::size_t j = 0; j < d; ++j) {
        sum(u, j) += z(u, j);
        sum_sq(u, j) += z(u, j) * z(u, j);
      }
    ++count;
  }

  void merge(const McAccumulator& other) {
    energy += other.energy;
    count += other.count;
    for (std::size_t i = 0; i < cross.values().size(); ++i) cross.values()[i] += other.cross.values()[i];
    for (std::size_t i = 0; i < sum.values().size(); ++i) {
      sum.values()[i] += other.sum.values()[i];
      sum_sq.values()[i] += other.sum_sq.values()[i];
    }
  }

  MonteCarloStats finish() const {
    const std::size_t f = cross.rows();
    const std::size_t d = sum.cols();
    const double n = static_cast<double>(count);
    MonteCarloStats out;
    out.chunks = count;
    out.energy = energy / n;
    out.covariance = MatrixD(f, f);
    for (std::size_t u = 0; u < f; ++u)
      for (std::size_t v = u; v < f; ++v) {
        const double c = cross(u, v) / (n * static_cast<double>(d));
        out.covariance(u, v) = c;
        out.covariance(v, u) = c;
      }
    out.mean = MatrixD(f, d);
    out.variance = MatrixD(f, d);
    for (std::size_t u = 0; u < f; ++u)
      for (std::size_t j = 0; j < d; ++j) {
        const double m = sum(u, j) / n;
        out.mean(u, j) = m;
        out.variance(u, j) = sum_sq(u, j) / n - m * m;
      }
    return out;
  }

  double energy = 0.0;
  std::size_t count = 0;
  MatrixD cross;  // upper triangle used
  MatrixD sum;
  MatrixD sum_sq;
};

}  // namespace flex::kernels::detail
