#include <vector>

#include "flex/kernels.hpp"
#include "mc_accumulator.hpp"

namespace flex::kernels::omp {

MonteCarloStats mc_stats(const AnsParams& params, std::size_t chunks) {
  const std::size_t blocks = (chunks + kChunkBlock - 1) / kChunkBlock;
  std::vector<detail::McAccumulator> partial(
      blocks, detail::McAccumulator(params.frames, params.dim));

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kChunkBlock;
    const std::size_t end = std::min(chunks, begin + kChunkBlock);
    for (std::size_t k = begin; k < end; ++k) partial[b].add(sample_chunk(params, k));
  }

  detail::McAccumulator total(params.frames, params.dim);
  for (const auto& p : partial) total.merge(p);
  return total.finish();
}

}  // namespace flex::kernels::omp
