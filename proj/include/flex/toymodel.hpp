#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "flex/cache.hpp"
#include "flex/matrix.hpp"
#include "flex/noise.hpp"
#include "flex/rope.hpp"

namespace flex {

// Single-head projections of the toy denoiser, entries N(0, 1) / sqrt(d).
struct ToyWeights {
  MatrixF wq;
  MatrixF wk;
  MatrixF wv;
  std::uint64_t seed = 0;
};

ToyWeights init_weights(std::uint64_t seed, int dim);

// Fixed-point relaxation x <- x + step_gain * (attention(x) - x), `steps` times.
struct DenoiseSchedule {
  int steps = 4;
  double step_gain = 0.5;

  void validate() const;
};

struct PipelineConfig {
  RopeSpec rope;
  ModulationMode mode = ModulationMode::FlexNtkByParts;
  AnsParams ans;  // ans.frames is the chunk size, ans.dim must equal rope.dim
  int window = 9;
  int sink = 3;
  int target_len = 84;
  DenoiseSchedule schedule;
  std::uint64_t model_seed = 0;

  int chunk() const { return ans.frames; }
  void validate() const;
};

struct GenerationTrace {
  MatrixF frames;                                  // target_len x d
  std::vector<std::vector<std::int64_t>> contexts;  // context indices seen by each chunk
  std::map<std::string, double> metrics;
};

// One attention pass over a chunk whose first frame has global index
// `first_index`. Queries come from the chunk; keys and values from the context
// plus chunk frames up to and including the query frame. Rotary positions are
// global indices.
MatrixF denoise_step(const MatrixF& chunk, std::int64_t first_index,
                     std::span<const FrameEntry> context, const ToyWeights& weights,
                     const RotaryEmbedding& rope, float step_gain);

GenerationTrace generate(const PipelineConfig& config);

// mix * chunk; mix must be f x f for an f-row chunk.
MatrixD linear_mixer(const MatrixD& chunk, const MatrixD& mix);

// Exact E sum_u ||y_u - y_{u-1}||^2 for y = mix * Z, Z ~ ANS(rho):
// d * Tr(D M Sigma(rho) (D M)^T) with D the adjacent-difference operator.
double pushforward_diff_energy(const MatrixD& mix, double rho, int dim);

}  // namespace flex
