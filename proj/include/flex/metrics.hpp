#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "flex/matrix.hpp"

namespace flex {

// sum_{u >= 1} ||x_u - x_{u-1}||^2 over the rows of `frames`.
template <typename T>
double adjacent_diff_energy(const Matrix<T>& frames);

// Cosine similarity between each chunk's mean frame and the first chunk's
// mean frame. Entries are empty where either mean has zero norm.
template <typename T>
std::vector<std::optional<double>> drift_proxy(const Matrix<T>& frames, std::size_t chunk_len);

struct MetricReport {
  double adjacent_energy = 0.0;
  std::vector<std::optional<double>> drift_curve;
  double mean_drift = 0.0;  // over defined entries; NaN if none
};

template <typename T>
MetricReport evaluate_metrics(const Matrix<T>& frames, std::size_t chunk_len);

}  // namespace flex
