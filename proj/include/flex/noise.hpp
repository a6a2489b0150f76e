#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flex/exec.hpp"
#include "flex/matrix.hpp"
#include "flex/rng.hpp"

namespace flex {

// Antiphase noise sampling: AR(1)-correlated initialization of one chunk.
//   z_0 ~ N(0, I),  z_u = rho * z_{u-1} + sqrt(1 - rho^2) * eps_u
struct AnsParams {
  double rho = -1.0;
  int frames = 3;  // f, latent frames per chunk
  int dim = 16;    // d, latent size per frame
  std::uint64_t seed = 0;

  // Throws ParameterError on |rho| > 1 or non-finite rho, ConfigError on
  // frames < 1 or dim < 1.
  void validate() const;
};

// f x d, rows are z_0 .. z_{f-1}.
using NoiseChunk = MatrixD;

NoiseChunk sample_chunk(const AnsParams& params, RngStream& rng);
// Chunk `stream` of the params.seed family. Monte-Carlo trial k uses stream k.
NoiseChunk sample_chunk(const AnsParams& params, std::uint64_t stream);

std::vector<NoiseChunk> sample_chunks(const AnsParams& params, std::size_t count,
                                      std::uint64_t first_stream = 0);

// Toeplitz matrix with entry (u, v) = rho^|u - v|.
MatrixD analytic_covariance(const AnsParams& params);

// 2 (f - 1)(1 - rho) d.
double analytic_energy(const AnsParams& params);

// Mean over chunks of sum_u ||z_u - z_{u-1}||^2. Throws UsageError when empty
// or ShapeError when chunk shapes differ.
double empirical_energy(std::span<const NoiseChunk> chunks);

inline constexpr std::size_t kMinCovarianceChunks = 1000;

// Entry (u, v) = mean over chunks and coordinates of z_u[j] * z_v[j].
// Requires at least kMinCovarianceChunks chunks.
MatrixD empirical_covariance(std::span<const NoiseChunk> chunks);

// Long AR(1) run with the same recursion, length x d. Requires length >= 2.
MatrixD sample_series(double rho, std::size_t length, int dim, RngStream& rng);

// Streaming Monte-Carlo moments over chunks with streams [0, chunks).
struct MonteCarloStats {
  std::size_t chunks = 0;
  double energy = 0.0;   // mean adjacent-difference energy
  MatrixD covariance;    // f x f, averaged over coordinates
  MatrixD mean;          // f x d per-coordinate mean
  MatrixD variance;      // f x d per-coordinate (population) variance
};

MonteCarloStats monte_carlo_stats(const AnsParams& params, std::size_t chunks,
                                  Exec exec = Exec::Parallel);

}  // namespace flex
