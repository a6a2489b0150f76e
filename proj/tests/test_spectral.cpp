#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "flex/errors.hpp"
#include "flex/noise.hpp"
#include "flex/spectral.hpp"

using namespace flex;

constexpr double kPi = std::numbers::pi;

TEST_CASE("analytic psd") {
  for (double w : {0.0, 0.3, 1.0, 2.0, kPi}) CHECK(analytic_psd(0.0, w) == 1.0);
  CHECK(analytic_psd(-0.5, kPi) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(analytic_psd(-0.5, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (double rho : {-0.95, -0.4, 0.2, 0.9})
    for (double w : {0.1, 0.7, 2.9}) CHECK(analytic_psd(rho, w) == analytic_psd(rho, -w));

  CHECK_THROWS_AS(analytic_psd(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(analytic_psd(-1.0, 0.5), DomainError);
  CHECK_THROWS_AS(analytic_psd(0.5, 4.0), DomainError);
  try {
    analytic_psd(1.0, 0.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("pole") != std::string::npos);
  }
}

TEST_CASE("psd endpoints") {
  const auto white = psd_endpoints(0.0);
  CHECK(white.at_zero == 1.0);
  CHECK(white.at_pi == 1.0);
  const auto anti = psd_endpoints(-0.8);
  CHECK(anti.at_zero == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(anti.at_pi == doctest::Approx(9.0).epsilon(1e-14));
  const auto pos = psd_endpoints(0.5);
  CHECK(pos.at_zero == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(pos.at_pi == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (double rho : {-0.9, -0.3, 0.6}) {
    const auto e = psd_endpoints(rho);
    CHECK(e.at_zero * e.at_pi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(e.at_zero - analytic_psd(rho, 0.0)) <= 1e-12);
    CHECK(std::abs(e.at_pi - analytic_psd(rho, kPi)) <= 1e-12);
  }
  CHECK_THROWS_AS(psd_endpoints(1.0), DomainError);
}

TEST_CASE("high-pass response") {
  CHECK(highpass_response(0.0) == 0.0);
  CHECK(highpass_response(kPi) == 4.0);
  CHECK(highpass_response(kPi / 2) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("parseval energy and mean power by quadrature") {
  CHECK(std::abs(parseval_energy(0.0) - 2.0) <= 1e-9);
  CHECK(std::abs(parseval_energy(-0.5) - 3.0) <= 1e-9);
  CHECK(std::abs(parseval_energy(0.9) - 0.2) <= 1e-9);
  for (double rho = -0.95; rho <= 0.951; rho += 0.05) {
    CHECK(std::abs(parseval_energy(rho) - 2.0 * (1.0 - rho)) <= 1e-9);
    CHECK(std::abs(mean_power(rho) - 1.0) <= 1e-9);
  }
  // Per-dimension, per-pair energy times d (f - 1) is the chunk energy law.
  for (double rho : {-0.9, -0.3, 0.3, 0.9}) {
    const AnsParams p{rho, 8, 64, 0};
    const double via_spectrum = parseval_energy(rho) * p.dim * (p.frames - 1);
    CHECK(std::abs(via_spectrum - analytic_energy(p)) <= 1e-9 * analytic_energy(p));
  }
  CHECK_THROWS_AS(parseval_energy(0.0, 32), UsageError);
  CHECK_THROWS_AS(parseval_energy(1.0), DomainError);
}

TEST_CASE("antiphase motion energy peaks at Nyquist") {
  for (double rho : {-0.95, -0.8, -0.5, -0.1}) {
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t i = 0; i < 1024; ++i) {
      const double w = kPi * static_cast<double>(i) / 1023.0;
      const double v = motion_energy_density(rho, w);
      if (v > best_value) {
        best_value = v;
        best = i;
      }
    }
    CHECK(best == 1023);
  }
}

TEST_CASE("periodogram") {
  SUBCASE("white noise is flat") {
    RngStream rng(101, 0);
    const auto series = sample_series(0.0, 65536, 4, rng);
    const auto curve = periodogram(series, 256);
    REQUIRE(curve.omegas.size() == 129);
    CHECK(curve.omegas.front() == 0.0);
    CHECK(curve.omegas.back() == doctest::Approx(kPi).epsilon(1e-15));
    double mean = 0.0;
    for (double v : curve.values) mean += v;
    mean /= static_cast<double>(curve.values.size());
    CHECK(std::abs(mean - 1.0) <= 0.05);
  }

  SUBCASE("antiphase spectrum matches the closed form") {
    RngStream rng(102, 0);
    const auto series = sample_series(-0.8, 65536, 4, rng);
    const auto curve = periodogram(series, 256);
    CHECK(psd_relative_l2_error(curve, -0.8) <= 0.05);
  }

  SUBCASE("zero input") {
    const MatrixD zeros(1024, 2);
    for (double v : periodogram(zeros, 64).values) CHECK(v == 0.0);
  }

  SUBCASE("usage errors") {
    const MatrixD small(100, 1);
    CHECK_THROWS_AS(periodogram(small, 128), UsageError);
    CHECK_THROWS_AS(periodogram(small, 48), UsageError);
    CHECK_THROWS_AS(periodogram(small, 8), UsageError);
  }
}
