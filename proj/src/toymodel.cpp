#include "flex/toymodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flex/errors.hpp"
#include "flex/metrics.hpp"

namespace flex {

namespace {

MatrixF random_matrix(std::uint64_t seed, std::uint64_t stream, int dim) {
  RngStream rng(seed, stream);
  const float scale = 1.0f / std::sqrt(static_cast<float>(dim));
  MatrixF m(dim, dim);
  for (float& x : m.values()) x = static_cast<float>(rng.normal()) * scale;
  return m;
}

// out = w * x
void matvec(const MatrixF& w, std::span<const float> x, std::span<float> out) {
  for (std::size_t r = 0; r < w.rows(); ++r) {
    float s = 0.0f;
    for (std::size_t c = 0; c < w.cols(); ++c) s += w(r, c) * x[c];
    out[r] = s;
  }
}

}  // namespace

ToyWeights init_weights(std::uint64_t seed, int dim) {
  if (dim < 1) throw ConfigError("init_weights: dim must be >= 1");
  return {random_matrix(seed, 0, dim), random_matrix(seed, 1, dim), random_matrix(seed, 2, dim),
          seed};
}

void DenoiseSchedule::validate() const {
  if (steps < 1) throw ConfigError("schedule: steps must be >= 1");
  if (!(step_gain >= 0.0 && step_gain <= 1.0))
    throw ConfigError("schedule: step_gain must lie in [0, 1]");
}

void PipelineConfig::validate() const {
  rope.validate();
  ans.validate();
  schedule.validate();
  if (ans.dim != rope.dim)
    throw ConfigError("pipeline: latent dim (" + std::to_string(ans.dim) +
                      ") must equal rope dim (" + std::to_string(rope.dim) + ")");
  if (target_len < 1 || target_len % chunk() != 0)
    throw ConfigError("pipeline: target_len must be a positive multiple of the chunk size");
  KvWindow probe(window, chunk(), sink);
}

MatrixF denoise_step(const MatrixF& chunk, std::int64_t first_index,
                     std::span<const FrameEntry> context, const ToyWeights& weights,
                     const RotaryEmbedding& rope, float step_gain) {
  const std::size_t d = weights.wq.rows();
  if (chunk.cols() != d || static_cast<int>(d) != rope.dim())
    throw ShapeError("denoise_step: chunk width, weight size and rope dim must agree");
  for (const auto& entry : context)
    if (entry.payload.size() != d) throw ShapeError("denoise_step: context payload size != dim");

  const std::size_t f = chunk.rows();
  const std::size_t n_ctx = context.size();
  const std::size_t n_keys = n_ctx + f;

  MatrixF keys(n_keys, d);
  MatrixF values(n_keys, d);
  MatrixF queries(f, d);
  for (std::size_t j = 0; j < n_ctx; ++j) {
    matvec(weights.wk, context[j].payload, keys.row(j));
    rope.rotate(keys.row(j), context[j].index);
    matvec(weights.wv, context[j].payload, values.row(j));
  }
  for (std::size_t u = 0; u < f; ++u) {
    const auto n = first_index + static_cast<std::int64_t>(u);
    matvec(weights.wk, chunk.row(u), keys.row(n_ctx + u));
    rope.rotate(keys.row(n_ctx + u), n);
    matvec(weights.wv, chunk.row(u), values.row(n_ctx + u));
    matvec(weights.wq, chunk.row(u), queries.row(u));
    rope.rotate(queries.row(u), n);
  }

  const float scale = 1.0f / std::sqrt(static_cast<float>(d));
  MatrixF out(f, d);
  std::vector<float> logits(n_keys);
  std::vector<float> attended(d);
  for (std::size_t u = 0; u < f; ++u) {
    const std::size_t visible = n_ctx + u + 1;
    float max_logit = -INFINITY;
    for (std::size_t j = 0; j < visible; ++j) {
      float s = 0.0f;
      for (std::size_t c = 0; c < d; ++c) s += queries(u, c) * keys(j, c);
      logits[j] = s * scale;
      max_logit = std::max(max_logit, logits[j]);
    }
    float denom = 0.0f;
    for (std::size_t j = 0; j < visible; ++j) {
      logits[j] = std::exp(logits[j] - max_logit);
      denom += logits[j];
    }
    std::fill(attended.begin(), attended.end(), 0.0f);
    for (std::size_t j = 0; j < visible; ++j) {
      const float p = logits[j] / denom;
      for (std::size_t c = 0; c < d; ++c) attended[c] += p * values(j, c);
    }
    for (std::size_t c = 0; c < d; ++c)
      out(u, c) = chunk(u, c) + step_gain * (attended[c] - chunk(u, c));
  }
  return out;
}

GenerationTrace generate(const PipelineConfig& config) {
  config.validate();
  const int f = config.chunk();
  const int d = config.rope.dim;
  const RotaryEmbedding rope(config.rope, config.mode, config.target_len);
  const ToyWeights weights = init_weights(config.model_seed, d);
  KvWindow window(config.window, f, config.sink);
  const auto gain = static_cast<float>(config.schedule.step_gain);

  GenerationTrace trace;
  trace.frames = MatrixF(config.target_len, d);
  double noise_energy = 0.0;
  const int chunks = config.target_len / f;
  for (int i = 0; i < chunks; ++i) {
    const NoiseChunk noise = sample_chunk(config.ans, static_cast<std::uint64_t>(i));
    noise_energy += adjacent_diff_energy(noise);

    MatrixF x(f, d);
    for (int u = 0; u < f; ++u)
      for (int c = 0; c < d; ++c) x(u, c) = static_cast<float>(noise(u, c));

    const auto context = window.context();
    trace.contexts.push_back(window.context_indices());
    const std::int64_t first = static_cast<std::int64_t>(i) * f;
    for (int s = 0; s < config.schedule.steps; ++s)
      x = denoise_step(x, first, context, weights, rope, gain);

    std::vector<FrameEntry> entries;
    for (int u = 0; u < f; ++u) {
      auto row = x.row(u);
      std::copy(row.begin(), row.end(), trace.frames.row(first + u).begin());
      entries.push_back({first + u, std::vector<float>(row.begin(), row.end())});
    }
    window.push_chunk(std::move(entries));
  }

  const auto report = evaluate_metrics(trace.frames, static_cast<std::size_t>(f));
  trace.metrics["adjacent_energy"] = report.adjacent_energy;
  trace.metrics["mean_drift"] = report.mean_drift;
  trace.metrics["noise_energy_per_chunk"] = noise_energy / chunks;
  trace.metrics["scale_S"] = rope.scale();
  return trace;
}

MatrixD linear_mixer(const MatrixD& chunk, const MatrixD& mix) {
  if (mix.rows() != chunk.rows() || mix.cols() != chunk.rows())
    throw ShapeError("linear_mixer: mix must be f x f for an f-row chunk");
  MatrixD out(chunk.rows(), chunk.cols());
  for (std::size_t r = 0; r < mix.rows(); ++r)
    for (std::size_t k = 0; k < mix.cols(); ++k) {
      const double w = mix(r, k);
      for (std::size_t j = 0; j < chunk.cols(); ++j) out(r, j) += w * chunk(k, j);
    }
  return out;
}

double pushforward_diff_energy(const MatrixD& mix, double rho, int dim) {
  if (mix.rows() != mix.cols() || mix.empty()) throw ShapeError("pushforward: mix must be square");
  if (dim < 1) throw ConfigError("pushforward: dim must be >= 1");
  const std::size_t f = mix.rows();
  const MatrixD sigma = analytic_covariance({rho, static_cast<int>(f), 1, 0});

  // Rows of D M are adjacent differences of the rows of M.
  double trace = 0.0;
  std::vector<double> a(f);
  for (std::size_t u = 1; u < f; ++u) {
    for (std::size_t k = 0; k < f; ++k) a[k] = mix(u, k) - mix(u - 1, k);
    for (std::size_t p = 0; p < f; ++p)
      for (std::size_t q = 0; q < f; ++q) trace += a[p] * sigma(p, q) * a[q];
  }
  return trace * dim;
}

}  // namespace flex
