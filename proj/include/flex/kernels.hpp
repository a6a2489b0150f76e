#pragma once

// Data-parallel kernels. Each has a straightforward serial reference kept for
// testing and benchmarking, and an OpenMP version. The OpenMP versions reduce
// over fixed-size blocks in block order, so their output does not depend on
// the thread count.

#include <cstddef>

#include "flex/matrix.hpp"
#include "flex/noise.hpp"

namespace flex::kernels {

inline constexpr std::size_t kChunkBlock = 256;

struct Spectrum {
  std::vector<double> omegas;  // 2 pi k / segment_len, k = 0 .. segment_len / 2
  std::vector<double> power;
};

namespace serial {
MonteCarloStats mc_stats(const AnsParams& params, std::size_t chunks);
// Direct O(N^2) DFT per segment; independent of the FFT path.
Spectrum periodogram(const MatrixD& series, std::size_t segment_len);
}  // namespace serial

namespace omp {
MonteCarloStats mc_stats(const AnsParams& params, std::size_t chunks);
// FFTW r2c per (segment, coordinate), reduced per segment.
Spectrum periodogram(const MatrixD& series, std::size_t segment_len);
}  // namespace omp

}  // namespace flex::kernels
