#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace flex {

// Human-readable description of the generator, written into run manifests.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 per stream; engine seed = splitmix64(seed ^ splitmix64(stream + 0x9e3779b97f4a7c15))";
inline constexpr std::string_view kNormalMethod =
    "std::normal_distribution<double> (libstdc++: Marsaglia polar)";

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

// One reproducible random stream. Streams with distinct (seed, stream) keys
// are statistically independent; parallel work must use disjoint stream ids.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi);
  std::uint64_t next_u64() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace flex
