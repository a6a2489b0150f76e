#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "flex/errors.hpp"
#include "flex/metrics.hpp"
#include "flex/toymodel.hpp"

using namespace flex;

namespace {

MatrixF random_chunk(RngStream& rng, std::size_t f, std::size_t d) {
  MatrixF m(f, d);
  for (float& x : m.values()) x = static_cast<float>(rng.normal());
  return m;
}

MatrixD near_identity_mix(std::uint64_t seed, std::size_t f, double eps) {
  RngStream rng(seed, 0);
  MatrixD m = MatrixD::identity(f);
  for (double& x : m.values()) x += eps * rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST_CASE("weights") {
  const auto a = init_weights(5, 16);
  const auto b = init_weights(5, 16);
  CHECK(a.wq == b.wq);
  CHECK(a.wk == b.wk);
  CHECK(a.wv == b.wv);
  CHECK_FALSE(init_weights(6, 16).wq == a.wq);
  CHECK_FALSE(a.wq == a.wk);
  const auto scalar = init_weights(9, 1);
  CHECK(std::abs(scalar.wq(0, 0)) < 6.0f);
  CHECK(scalar.wq(0, 0) != 0.0f);
  CHECK_THROWS_AS(init_weights(1, 0), ConfigError);
}

TEST_CASE("denoise step basics") {
  const RopeSpec spec;
  const RotaryEmbedding rope(spec, ModulationMode::FlexNtkByParts, 84);
  const auto w = init_weights(3, spec.dim);
  RngStream rng(4, 0);

  SUBCASE("single token returns its value projection") {
    const auto x = random_chunk(rng, 1, spec.dim);
    const auto y = denoise_step(x, 0, {}, w, rope, 1.0f);
    for (int r = 0; r < spec.dim; ++r) {
      float v = 0.0f;
      for (int c = 0; c < spec.dim; ++c) v += w.wv(r, c) * x(0, c);
      CHECK(y(0, r) == doctest::Approx(v).epsilon(1e-5));
    }
  }

  SUBCASE("zero gain is the identity") {
    const auto x = random_chunk(rng, 3, spec.dim);
    std::vector<FrameEntry> ctx{{0, std::vector<float>(spec.dim, 0.5f)}};
    CHECK(denoise_step(x, 1, ctx, w, rope, 0.0f) == x);
  }

  SUBCASE("shifting every global index leaves the output unchanged") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_chunk(rng, 3, spec.dim);
      std::vector<FrameEntry> ctx;
      for (std::int64_t i : {0, 1, 2, 12, 13, 14}) {
        const auto row = random_chunk(rng, 1, spec.dim);
        ctx.push_back({i, std::vector<float>(row.values().begin(), row.values().end())});
      }
      const auto base = denoise_step(x, 15, ctx, w, rope, 0.5f);
      const std::int64_t delta = 1 + static_cast<std::int64_t>(rng.uniform(0, 500));
      auto shifted_ctx = ctx;
      for (auto& e : shifted_ctx) e.index += delta;
      const auto shifted = denoise_step(x, 15 + delta, shifted_ctx, w, rope, 0.5f);
      for (std::size_t i = 0; i < base.values().size(); ++i)
        CHECK(std::abs(base.values()[i] - shifted.values()[i]) <= 1e-4f);
    }
  }

  SUBCASE("shape errors") {
    const auto x = random_chunk(rng, 3, spec.dim - 1);
    CHECK_THROWS_AS(denoise_step(x, 0, {}, w, rope, 0.5f), ShapeError);
    const auto ok = random_chunk(rng, 3, spec.dim);
    std::vector<FrameEntry> bad{{0, {1.0f}}};
    CHECK_THROWS_AS(denoise_step(ok, 1, bad, w, rope, 0.5f), ShapeError);
  }
}

TEST_CASE("generate") {
  PipelineConfig cfg;
  cfg.target_len = 21;
  const auto trace = generate(cfg);
  CHECK(trace.frames.rows() == 21);
  CHECK(trace.frames.cols() == 16);
  CHECK(trace.contexts.size() == 7);
  for (float v : trace.frames.values()) CHECK(std::isfinite(v));

  const auto again = generate(cfg);
  CHECK(again.frames == trace.frames);
  CHECK(again.contexts == trace.contexts);
  CHECK(again.metrics == trace.metrics);

  PipelineConfig other = cfg;
  other.ans.seed = 1;
  CHECK_FALSE(generate(other).frames == trace.frames);

  SUBCASE("sink frames persist after the window overflows") {
    PipelineConfig long_cfg;
    const auto t = generate(long_cfg);
    CHECK(t.frames.rows() == 84);
    bool overflowed = false;
    for (std::size_t step = 0; step < t.contexts.size(); ++step) {
      const auto& ctx = t.contexts[step];
      if (static_cast<std::int64_t>(step) * 3 > 6) overflowed = true;
      if (overflowed) {
        REQUIRE(ctx.size() >= 3);
        CHECK(ctx[0] == 0);
        CHECK(ctx[1] == 1);
        CHECK(ctx[2] == 2);
        CHECK(ctx.size() == 6);
      }
    }
    CHECK(overflowed);
    CHECK(t.metrics.at("scale_S") == 4.0);
  }
}

TEST_CASE("pipeline validation") {
  PipelineConfig cfg;
  cfg.target_len = 20;
  CHECK_THROWS_AS(generate(cfg), ConfigError);
  cfg = PipelineConfig{};
  cfg.ans.dim = 8;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = PipelineConfig{};
  cfg.window = 5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = PipelineConfig{};
  cfg.ans.rho = -2.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = PipelineConfig{};
  cfg.schedule.steps = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("linear mixer") {
  RngStream rng(6, 0);
  MatrixD z(4, 3);
  for (double& x : z.values()) x = rng.normal();

  CHECK(linear_mixer(z, MatrixD::identity(4)) == z);

  const auto avg = linear_mixer(z, MatrixD(4, 4, 0.25));
  for (std::size_t j = 0; j < 3; ++j) {
    const double mean = (z(0, j) + z(1, j) + z(2, j) + z(3, j)) / 4.0;
    for (std::size_t u = 0; u < 4; ++u) CHECK(avg(u, j) == doctest::Approx(mean).epsilon(1e-14));
  }

  MatrixD perm(4, 4);
  perm(0, 2) = perm(1, 0) = perm(2, 3) = perm(3, 1) = 1.0;
  const auto p = linear_mixer(z, perm);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(p(0, j) == z(2, j));
    CHECK(p(1, j) == z(0, j));
    CHECK(p(2, j) == z(3, j));
    CHECK(p(3, j) == z(1, j));
  }
  CHECK_THROWS_AS(linear_mixer(z, MatrixD(3, 3)), ShapeError);
}

TEST_CASE("pushforward energy") {
  CHECK(pushforward_diff_energy(MatrixD::identity(8), 0.0, 64) == doctest::Approx(896.0).epsilon(1e-14));
  for (double rho : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const AnsParams p{rho, 8, 64, 0};
    CHECK(std::abs(pushforward_diff_energy(MatrixD::identity(8), rho, 64) - analytic_energy(p)) <=
          1e-12 * std::max(1.0, analytic_energy(p)));
    CHECK(std::abs(pushforward_diff_energy(MatrixD(5, 5, 0.2), rho, 16)) <= 1e-12);
  }

  const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(pushforward_diff_energy(MatrixD::identity(4), grid[i], 8) <
          pushforward_diff_energy(MatrixD::identity(4), grid[i - 1], 8));

  // Holds for near-identity mixes; general random mixes can violate it.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto mix = near_identity_mix(seed, 4, 0.1);
    for (std::size_t i = 1; i < grid.size(); ++i)
      CHECK(pushforward_diff_energy(mix, grid[i], 8) <= pushforward_diff_energy(mix, grid[i - 1], 8));
  }

  CHECK_THROWS_AS(pushforward_diff_energy(MatrixD(3, 4), 0.0, 8), ShapeError);
}

TEST_CASE("pushforward matches Monte Carlo through the mixer") {
  for (double rho : {-0.8, 0.0, 0.8}) {
    const AnsParams p{rho, 4, 8, 404};
    const auto mix = near_identity_mix(11, 4, 0.5);
    double total = 0.0;
    constexpr std::size_t kSamples = 20000;
    for (std::size_t k = 0; k < kSamples; ++k)
      total += adjacent_diff_energy(linear_mixer(sample_chunk(p, k), mix));
    const double exact = pushforward_diff_energy(mix, rho, 8);
    CHECK(std::abs(total / kSamples - exact) / exact <= 0.03);
  }
}
