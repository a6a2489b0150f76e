#include "flex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flex/errors.hpp"

namespace flex {

template <typename T>
double adjacent_diff_energy(const Matrix<T>& frames) {
  double energy = 0.0;
  for (std::size_t u = 1; u < frames.rows(); ++u)
    for (std::size_t j = 0; j < frames.cols(); ++j) {
      const double diff = static_cast<double>(frames(u, j)) - static_cast<double>(frames(u - 1, j));
      energy += diff * diff;
    }
  return energy;
}

template <typename T>
std::vector<std::optional<double>> drift_proxy(const Matrix<T>& frames, std::size_t chunk_len) {
  if (chunk_len < 1 || frames.rows() < chunk_len)
    throw UsageError("drift_proxy: need at least one full reference chunk");
  const std::size_t d = frames.cols();
  const std::size_t chunks = (frames.rows() + chunk_len - 1) / chunk_len;

  std::vector<std::vector<double>> means(chunks, std::vector<double>(d, 0.0));
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * chunk_len;
    const std::size_t end = std::min(frames.rows(), begin + chunk_len);
    for (std::size_t u = begin; u < end; ++u)
      for (std::size_t j = 0; j < d; ++j) means[c][j] += frames(u, j);
    for (double& x : means[c]) x /= static_cast<double>(end - begin);
  }

  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  const double ref_norm = norm(means[0]);
  std::vector<std::optional<double>> out(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const double n = norm(means[c]);
    if (ref_norm == 0.0 || n == 0.0) continue;
    double dot = 0.0;
    for (std::size_t j = 0; j < d; ++j) dot += means[0][j] * means[c][j];
    out[c] = std::clamp(dot / (ref_norm * n), -1.0, 1.0);
  }
  return out;
}

template <typename T>
MetricReport evaluate_metrics(const Matrix<T>& frames, std::size_t chunk_len) {
  MetricReport report;
  report.adjacent_energy = adjacent_diff_energy(frames);
  report.drift_curve = drift_proxy(frames, chunk_len);
  double sum = 0.0;
  std::size_t defined = 0;
  for (const auto& v : report.drift_curve)
    if (v) {
      sum += *v;
      ++defined;
    }
  report.mean_drift = defined ? sum / static_cast<double>(defined)
                              : std::numeric_limits<double>::quiet_NaN();
  return report;
}

template double adjacent_diff_energy(const Matrix<float>&);
template double adjacent_diff_energy(const Matrix<double>&);
template std::vector<std::optional<double>> drift_proxy(const Matrix<float>&, std::size_t);
template std::vector<std::optional<double>> drift_proxy(const Matrix<double>&, std::size_t);
template MetricReport evaluate_metrics(const Matrix<float>&, std::size_t);
template MetricReport evaluate_metrics(const Matrix<double>&, std::size_t);

}  // namespace flex
