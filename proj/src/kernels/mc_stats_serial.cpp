#include "flex/kernels.hpp"
#include "mc_accumulator.hpp"

namespace flex::kernels::serial {

MonteCarloStats mc_stats(const AnsParams& params, std::size_t chunks) {
  detail::McAccumulator acc(params.frames, params.dim);
  for (std::size_t k = 0; k < chunks; ++k) acc.add(sample_chunk(params, k));
  return acc.finish();
}

}  // namespace flex::kernels::serial
