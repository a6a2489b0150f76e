#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

namespace flex {

struct FrameEntry {
  std::int64_t index = 0;      // global latent-frame position
  std::vector<float> payload;  // frame latent; keys/values are recomputed from it

  bool operator==(const FrameEntry&) const = default;
};

// Sink-pinned rolling context. The first `sink` generated frames stay in the
// window for the rest of the run; the remaining budget holds the most recent
// frames. Sink frames count against the budget, so the context never exceeds
// window - chunk frames.
class KvWindow {
 public:
  // Throws ConfigError unless chunk >= 1, sink >= 0 and window >= chunk + sink.
  KvWindow(int window, int chunk, int sink);

  // `frames` must be exactly `chunk` entries with consecutive indices starting
  // at next_index(); otherwise throws SequencingError.
  void push_chunk(std::vector<FrameEntry> frames);

  // Sink frames then rolling frames, ascending global index.
  std::vector<FrameEntry> context() const;
  std::vector<std::int64_t> context_indices() const;

  int window() const { return window_; }
  int chunk() const { return chunk_; }
  int sink_budget() const { return sink_budget_; }
  int capacity() const { return window_ - chunk_; }
  std::int64_t next_index() const { return next_index_; }
  std::size_t size() const { return sink_.size() + rolling_.size(); }

 private:
  int window_;
  int chunk_;
  int sink_budget_;
  std::int64_t next_index_ = 0;
  std::vector<FrameEntry> sink_;
  std::deque<FrameEntry> rolling_;
};

// One line of the context trace: "step,i0,i1,...".
std::string format_context_line(std::size_t step, const std::vector<std::int64_t>& indices);

}  // namespace flex
