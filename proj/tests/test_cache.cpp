#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "flex/cache.hpp"
#include "flex/errors.hpp"
#include "flex/rng.hpp"

using namespace flex;

namespace {

std::vector<FrameEntry> chunk_at(std::int64_t first, int f) {
  std::vector<FrameEntry> out;
  for (int u = 0; u < f; ++u) out.push_back({first + u, {static_cast<float>(first + u)}});
  return out;
}

// Recomputes the context from the full history: every generated frame below
// the sink budget, plus the most recent other frames filling the remainder.
std::vector<std::int64_t> brute_force_context(std::int64_t generated, int w, int f, int sink) {
  std::vector<std::int64_t> pinned;
  std::vector<std::int64_t> others;
  for (std::int64_t i = 0; i < generated; ++i) (i < sink ? pinned : others).push_back(i);
  const auto room = static_cast<std::size_t>(w - f) - pinned.size();
  const auto keep = std::min(room, others.size());
  pinned.insert(pinned.end(), others.end() - static_cast<std::ptrdiff_t>(keep), others.end());
  return pinned;
}

}  // namespace

TEST_CASE("window construction") {
  KvWindow w(9, 3, 3);
  CHECK(w.capacity() == 6);
  CHECK(w.context().empty());
  CHECK_NOTHROW(KvWindow(9, 3, 0));
  CHECK_THROWS_AS(KvWindow(3, 3, 1), ConfigError);
  CHECK_THROWS_AS(KvWindow(9, 0, 0), ConfigError);
  CHECK_THROWS_AS(KvWindow(9, 3, -1), ConfigError);
}

TEST_CASE("sink-pinned eviction, default window") {
  KvWindow w(9, 3, 3);
  w.push_chunk(chunk_at(0, 3));
  CHECK(w.context_indices() == std::vector<std::int64_t>{0, 1, 2});
  for (int c = 1; c < 5; ++c) w.push_chunk(chunk_at(3 * c, 3));
  CHECK(w.context_indices() == std::vector<std::int64_t>{0, 1, 2, 12, 13, 14});
  const auto ctx = w.context();
  REQUIRE(ctx.size() == 6);
  CHECK(ctx[3].payload == std::vector<float>{12.0f});
}

TEST_CASE("pure sliding window") {
  KvWindow w(9, 3, 0);
  w.push_chunk(chunk_at(0, 3));
  w.push_chunk(chunk_at(3, 3));
  CHECK(w.context_indices() == std::vector<std::int64_t>{0, 1, 2, 3, 4, 5});
  for (int c = 2; c < 5; ++c) w.push_chunk(chunk_at(3 * c, 3));
  CHECK(w.context_indices() == std::vector<std::int64_t>{9, 10, 11, 12, 13, 14});
}

TEST_CASE("sequencing errors") {
  KvWindow w(9, 3, 3);
  CHECK_THROWS_AS(w.push_chunk(chunk_at(1, 3)), SequencingError);
  CHECK_THROWS_AS(w.push_chunk(chunk_at(0, 2)), SequencingError);
  auto gap = chunk_at(0, 3);
  gap[2].index = 5;
  CHECK_THROWS_AS(w.push_chunk(gap), SequencingError);
  w.push_chunk(chunk_at(0, 3));
  CHECK_THROWS_AS(w.push_chunk(chunk_at(0, 3)), SequencingError);
  CHECK(w.next_index() == 3);
}

TEST_CASE("matches brute-force recomputation on random configurations") {
  RngStream rng(2718, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int f = 1 + static_cast<int>(rng.next_u64() % 6);
    const int sink = static_cast<int>(rng.next_u64() % 8);
    const int w = f + sink + static_cast<int>(rng.next_u64() % 10);
    KvWindow window(w, f, sink);
    std::set<std::int64_t> seen_sinks;
    for (int c = 0; c < 50; ++c) {
      window.push_chunk(chunk_at(static_cast<std::int64_t>(c) * f, f));
      const auto ctx = window.context_indices();
      const auto generated = static_cast<std::int64_t>(c + 1) * f;
      CHECK(ctx == brute_force_context(generated, w, f, sink));
      CHECK(static_cast<int>(ctx.size()) <= w - f);
      CHECK(std::is_sorted(ctx.begin(), ctx.end()));
      for (auto i : ctx)
        if (i < sink) seen_sinks.insert(i);
      for (auto s : seen_sinks) CHECK(std::find(ctx.begin(), ctx.end(), s) != ctx.end());
    }
  }
}

TEST_CASE("context trace line") {
  CHECK(format_context_line(5, {0, 1, 2, 12, 13, 14}) == "5,0,1,2,12,13,14");
  CHECK(format_context_line(0, {}) == "0");
}
