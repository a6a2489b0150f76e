#include "flex/noise.hpp"

#include <cmath>
#include <string>

#include "flex/errors.hpp"
#include "flex/kernels.hpp"

namespace flex {

namespace {

void check_rho(double rho) {
  if (!std::isfinite(rho) || std::abs(rho) > 1.0)
    throw ParameterError("rho must lie in [-1, 1], got " + std::to_string(rho));
}

}  // namespace

void AnsParams::validate() const {
  check_rho(rho);
  if (frames < 1) throw ConfigError("noise: frames must be >= 1");
  if (dim < 1) throw ConfigError("noise: dim must be >= 1");
}

NoiseChunk sample_chunk(const AnsParams& params, RngStream& rng) {
  params.validate();
  const auto f = static_cast<std::size_t>(params.frames);
  const auto d = static_cast<std::size_t>(params.dim);
  const double rho = params.rho;
  const double innovation = std::sqrt(1.0 - rho * rho);

  NoiseChunk chunk(f, d);
  for (std::size_t j = 0; j < d; ++j) chunk(0, j) = rng.normal();
  // Innovations are drawn even when |rho| = 1 so a stream yields the same
  // draws for every rho.
  for (std::size_t u = 1; u < f; ++u)
    for (std::size_t j = 0; j < d; ++j)
      chunk(u, j) = rho * chunk(u - 1, j) + innovation * rng.normal();
  return chunk;
}

NoiseChunk sample_chunk(const AnsParams& params, std::uint64_t stream) {
  RngStream rng(params.seed, stream);
  return sample_chunk(params, rng);
}

std::vector<NoiseChunk> sample_chunks(const AnsParams& params, std::size_t count,
                                      std::uint64_t first_stream) {
  params.validate();
  std::vector<NoiseChunk> out(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k)
    out[k] = sample_chunk(params, first_stream + static_cast<std::uint64_t>(k));
  return out;
}

MatrixD analytic_covariance(const AnsParams& params) {
  params.validate();
  const auto f = static_cast<std::size_t>(params.frames);
  MatrixD cov(f, f);
  for (std::size_t u = 0; u < f; ++u)
    for (std::size_t v = 0; v < f; ++v) {
      const int lag = static_cast<int>(u > v ? u - v : v - u);
      cov(u, v) = lag == 0 ? 1.0 : std::pow(params.rho, lag);
    }
  return cov;
}

double analytic_energy(const AnsParams& params) {
  params.validate();
  return 2.0 * (params.frames - 1) * (1.0 - params.rho) * params.dim;
}

double empirical_energy(std::span<const NoiseChunk> chunks) {
  if (chunks.empty()) throw UsageError("empirical_energy: no chunks");
  const auto f = chunks.front().rows();
  const auto d = chunks.front().cols();
  double total = 0.0;
  for (const auto& chunk : chunks) {
    if (chunk.rows() != f || chunk.cols() != d)
      throw ShapeError("empirical_energy: chunks differ in shape");
    double e = 0.0;
    for (std::size_t u = 1; u < f; ++u)
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = chunk(u, j) - chunk(u - 1, j);
        e += diff * diff;
      }
    total += e;
  }
  return total / static_cast<double>(chunks.size());
}

MatrixD empirical_covariance(std::span<const NoiseChunk> chunks) {
  if (chunks.size() < kMinCovarianceChunks)
    throw UsageError("empirical_covariance: need at least " +
                     std::to_string(kMinCovarianceChunks) + " chunks, got " +
                     std::to_string(chunks.size()));
  const auto f = chunks.front().rows();
  const auto d = chunks.front().cols();
  MatrixD cov(f, f);
  for (const auto& chunk : chunks) {
    if (chunk.rows() != f || chunk.cols() != d)
      throw ShapeError("empirical_covariance: chunks differ in shape");
    for (std::size_t u = 0; u < f; ++u)
      for (std::size_t v = 0; v < f; ++v) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += chunk(u, j) * chunk(v, j);
        cov(u, v) += s;
      }
  }
  const double norm = static_cast<double>(chunks.size()) * static_cast<double>(d);
  for (double& x : cov.values()) x /= norm;
  return cov;
}

MatrixD sample_series(double rho, std::size_t length, int dim, RngStream& rng) {
  check_rho(rho);
  if (length < 2) throw UsageError("sample_series: length must be >= 2");
  if (dim < 1) throw ConfigError("sample_series: dim must be >= 1");
  AnsParams params{rho, static_cast<int>(length), dim, rng.seed()};
  return sample_chunk(params, rng);
}

MonteCarloStats monte_carlo_stats(const AnsParams& params, std::size_t chunks, Exec exec) {
  params.validate();
  if (chunks == 0) throw UsageError("monte_carlo_stats: chunks must be > 0");
  return exec == Exec::Serial ? kernels::serial::mc_stats(params, chunks)
                              : kernels::omp::mc_stats(params, chunks);
}

}  // namespace flex
