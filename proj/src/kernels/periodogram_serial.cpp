#include <cmath>
#include <numbers>

#include "flex/kernels.hpp"

namespace flex::kernels::serial {

Spectrum periodogram(const MatrixD& series, std::size_t segment_len) {
  const std::size_t n = segment_len;
  const std::size_t bins = n / 2 + 1;
  const std::size_t segments = series.rows() / n;
  const std::size_t d = series.cols();

  std::vector<double> cos_table(n);
  std::vector<double> sin_table(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    cos_table[t] = std::cos(a);
    sin_table[t] = std::sin(a);
  }

  Spectrum out;
  out.power.assign(bins, 0.0);
  for (std::size_t s = 0; s < segments; ++s)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < bins; ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const double x = series(s * n + t, j);
          const std::size_t idx = (k * t) % n;
          re += x * cos_table[idx];
          im -= x * sin_table[idx];
        }
        out.power[k] += (re * re + im * im) / static_cast<double>(n);
      }

  const double count = static_cast<double>(segments * d);
  for (std::size_t k = 0; k < bins; ++k) {
    out.power[k] /= count;
    out.omegas.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  return out;
}

}  // namespace flex::kernels::serial
