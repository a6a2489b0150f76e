#include <cmath>
#include <vector>

#include "doctest.h"
#include "flex/errors.hpp"
#include "flex/metrics.hpp"
#include "flex/noise.hpp"

using namespace flex;

TEST_CASE("adjacent difference energy") {
  CHECK(adjacent_diff_energy(MatrixD(10, 4, 2.5)) == 0.0);
  CHECK(adjacent_diff_energy(MatrixD(1, 4, 1.0)) == 0.0);

  const double a = 1.5;
  const std::size_t rows = 7, d = 5;
  MatrixD alt(rows, d);
  for (std::size_t u = 0; u < rows; ++u)
    for (std::size_t j = 0; j < d; ++j) alt(u, j) = (u % 2 ? -a : a);
  CHECK(adjacent_diff_energy(alt) == doctest::Approx(4 * a * a * d * (rows - 1)).epsilon(1e-15));

  const auto chunk = sample_chunk(AnsParams{-0.5, 8, 16, 3}, 0);
  const std::vector<NoiseChunk> one{chunk};
  CHECK(adjacent_diff_energy(chunk) == empirical_energy(one));

  MatrixD b = alt;
  b(3, 2) += 1e-3;
  CHECK(adjacent_diff_energy(b) > 0.0);
}

TEST_CASE("drift proxy") {
  RngStream rng(1, 0);
  MatrixD base(3, 6);
  for (double& x : base.values()) x = rng.normal();

  MatrixD repeated(12, 6);
  for (std::size_t u = 0; u < 12; ++u)
    for (std::size_t j = 0; j < 6; ++j) repeated(u, j) = base(u % 3, j);
  for (const auto& v : drift_proxy(repeated, 3)) {
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(1.0).epsilon(1e-12));
  }

  MatrixD flipped = repeated;
  for (std::size_t u = 6; u < 12; ++u)
    for (std::size_t j = 0; j < 6; ++j) flipped(u, j) = -flipped(u, j);
  const auto curve = drift_proxy(flipped, 3);
  CHECK(*curve[0] == doctest::Approx(1.0));
  CHECK(*curve[2] == doctest::Approx(-1.0));
  CHECK(*curve[3] == doctest::Approx(-1.0));

  MatrixD scaled = flipped;
  for (double& x : scaled.values()) x *= 7.25;
  const auto scaled_curve = drift_proxy(scaled, 3);
  for (std::size_t i = 0; i < curve.size(); ++i)
    CHECK(*scaled_curve[i] == doctest::Approx(*curve[i]).epsilon(1e-12));

  const auto undefined = drift_proxy(MatrixD(6, 2), 3);
  CHECK_FALSE(undefined[0].has_value());
  CHECK_FALSE(undefined[1].has_value());

  CHECK_THROWS_AS(drift_proxy(MatrixD(2, 2), 3), UsageError);
}

TEST_CASE("random walks drift away from their start on average") {
  constexpr std::size_t kSeeds = 100, kLen = 60, kDim = 32, kChunk = 3;
  std::vector<double> mean_curve(kLen / kChunk, 0.0);
  for (std::size_t s = 0; s < kSeeds; ++s) {
    RngStream rng(500 + s, 0);
    MatrixD walk(kLen, kDim);
    for (std::size_t j = 0; j < kDim; ++j) walk(0, j) = rng.normal();
    for (std::size_t u = 1; u < kLen; ++u)
      for (std::size_t j = 0; j < kDim; ++j) walk(u, j) = walk(u - 1, j) + rng.normal();
    const auto curve = drift_proxy(walk, kChunk);
    for (std::size_t c = 0; c < curve.size(); ++c) mean_curve[c] += *curve[c] / kSeeds;
  }
  CHECK(mean_curve[0] == doctest::Approx(1.0));
  for (std::size_t c = 1; c < mean_curve.size(); ++c) CHECK(mean_curve[c] <= mean_curve[c - 1] + 0.02);
  CHECK(mean_curve.back() < mean_curve[1] - 0.2);
}

TEST_CASE("metric report") {
  MatrixF frames(6, 2, 1.0f);
  const auto report = evaluate_metrics(frames, 3);
  CHECK(report.adjacent_energy == 0.0);
  CHECK(report.drift_curve.size() == 2);
  CHECK(report.mean_drift == doctest::Approx(1.0));
  CHECK(std::isnan(evaluate_metrics(MatrixF(6, 2), 3).mean_drift));
}
