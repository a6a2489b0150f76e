#include <omp.h>

#include <cmath>

#include "doctest.h"
#include "flex/kernels.hpp"
#include "flex/noise.hpp"
#include "flex/spectral.hpp"

using namespace flex;

namespace {

double max_abs_diff(const MatrixD& a, const MatrixD& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace

TEST_CASE("Monte-Carlo kernel agrees with the serial reference") {
  for (double rho : {-1.0, -0.3, 0.7}) {
    const AnsParams p{rho, 5, 12, 9};
    const auto ref = kernels::serial::mc_stats(p, 3000);
    const auto par = kernels::omp::mc_stats(p, 3000);
    CHECK(par.chunks == ref.chunks);
    CHECK(par.energy == doctest::Approx(ref.energy).epsilon(1e-12));
    CHECK(max_abs_diff(par.covariance, ref.covariance) <= 1e-12);
    CHECK(max_abs_diff(par.mean, ref.mean) <= 1e-12);
    CHECK(max_abs_diff(par.variance, ref.variance) <= 1e-12);
  }
}

TEST_CASE("Monte-Carlo kernel agrees with the list-based estimators") {
  const AnsParams p{-0.6, 4, 8, 21};
  const auto chunks = sample_chunks(p, 2000);
  const auto stats = monte_carlo_stats(p, 2000);
  CHECK(stats.energy == doctest::Approx(empirical_energy(chunks)).epsilon(1e-12));
  CHECK(max_abs_diff(stats.covariance, empirical_covariance(chunks)) <= 1e-12);
}

TEST_CASE("parallel kernels do not depend on the thread count") {
  const AnsParams p{-0.5, 4, 16, 13};
  RngStream rng(13, 1);
  const auto series = sample_series(0.4, 8192, 3, rng);

  omp_set_num_threads(1);
  const auto stats1 = kernels::omp::mc_stats(p, 1500);
  const auto spec1 = kernels::omp::periodogram(series, 128);
  omp_set_num_threads(4);
  const auto stats4 = kernels::omp::mc_stats(p, 1500);
  const auto spec4 = kernels::omp::periodogram(series, 128);

  CHECK(stats1.energy == stats4.energy);
  CHECK(stats1.covariance == stats4.covariance);
  CHECK(stats1.variance == stats4.variance);
  CHECK(spec1.power == spec4.power);
}

TEST_CASE("FFT periodogram agrees with the direct DFT reference") {
  RngStream rng(77, 0);
  const auto series = sample_series(-0.7, 4096, 2, rng);
  for (std::size_t seg : {16, 64, 256}) {
    const auto ref = kernels::serial::periodogram(series, seg);
    const auto fft = kernels::omp::periodogram(series, seg);
    REQUIRE(ref.power.size() == seg / 2 + 1);
    CHECK(ref.omegas == fft.omegas);
    for (std::size_t k = 0; k < ref.power.size(); ++k)
      CHECK(fft.power[k] == doctest::Approx(ref.power[k]).epsilon(1e-9));
  }
  // Public entry point dispatches to both.
  const auto a = periodogram(series, 64, Exec::Serial);
  const auto b = periodogram(series, 64, Exec::Parallel);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-9));
}

TEST_CASE("a pure tone lands in its bin") {
  const std::size_t n = 64;
  MatrixD tone(4 * n, 1);
  for (std::size_t t = 0; t < tone.rows(); ++t)
    tone(t, 0) = std::cos(2.0 * M_PI * 5.0 * static_cast<double>(t) / n);
  const auto spec = kernels::omp::periodogram(tone, n);
  // |X_5|^2 / N = (N/2)^2 / N = N / 4.
  CHECK(spec.power[5] == doctest::Approx(n / 4.0).epsilon(1e-12));
  for (std::size_t k = 0; k < spec.power.size(); ++k)
    if (k != 5) CHECK(spec.power[k] <= 1e-18);
}
