#include <fftw3.h>

#include <memory>
#include <mutex>
#include <numbers>

#include "flex/kernels.hpp"

namespace flex::kernels::omp {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t count) {
  return std::unique_ptr<T[], FftwFree>(static_cast<T*>(fftw_malloc(sizeof(T) * count)));
}

}  // namespace

Spectrum periodogram(const MatrixD& series, std::size_t segment_len) {
  const std::size_t n = segment_len;
  const std::size_t bins = n / 2 + 1;
  const std::size_t segments = series.rows() / n;
  const std::size_t d = series.cols();

  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(bins);
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }

  // partial[s * bins + k]: power of bin k summed over coordinates of segment s.
  std::vector<double> partial(segments * bins, 0.0);

#pragma omp parallel
  {
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(bins);
#pragma omp for schedule(static)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(segments); ++s) {
      double* acc = partial.data() + static_cast<std::size_t>(s) * bins;
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t t = 0; t < n; ++t) in[t] = series(static_cast<std::size_t>(s) * n + t, j);
        fftw_execute_dft_r2c(plan.get(), in.get(), out.get());
        for (std::size_t k = 0; k < bins; ++k)
          acc[k] += (out[k][0] * out[k][0] + out[k][1] * out[k][1]) / static_cast<double>(n);
      }
    }
  }

  Spectrum result;
  result.power.assign(bins, 0.0);
  for (std::size_t s = 0; s < segments; ++s)
    for (std::size_t k = 0; k < bins; ++k) result.power[k] += partial[s * bins + k];
  const double count = static_cast<double>(segments * d);
  for (std::size_t k = 0; k < bins; ++k) {
    result.power[k] /= count;
    result.omegas.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  return result;
}

}  // namespace flex::kernels::omp
