#include "flex/cache.hpp"

#include "flex/errors.hpp"

namespace flex {

KvWindow::KvWindow(int window, int chunk, int sink)
    : window_(window), chunk_(chunk), sink_budget_(sink) {
  if (chunk < 1) throw ConfigError("window: chunk must be >= 1");
  if (sink < 0) throw ConfigError("window: sink must be >= 0");
  if (window < chunk + sink)
    throw ConfigError("window: size " + std::to_string(window) + " < chunk " +
                      std::to_string(chunk) + " + sink " + std::to_string(sink));
}

void KvWindow::push_chunk(std::vector<FrameEntry> frames) {
  if (static_cast<int>(frames.size()) != chunk_)
    throw SequencingError("push_chunk: expected " + std::to_string(chunk_) + " frames, got " +
                          std::to_string(frames.size()));
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto expected = next_index_ + static_cast<std::int64_t>(i);
    if (frames[i].index != expected)
      throw SequencingError("push_chunk: expected frame index " + std::to_string(expected) +
                            ", got " + std::to_string(frames[i].index));
  }
  next_index_ += chunk_;

  for (auto& frame : frames) {
    if (frame.index < sink_budget_)
      sink_.push_back(std::move(frame));
    else
      rolling_.push_back(std::move(frame));
  }
  const auto rolling_budget = static_cast<std::size_t>(capacity()) - sink_.size();
  while (rolling_.size() > rolling_budget) rolling_.pop_front();
}

std::vector<FrameEntry> KvWindow::context() const {
  std::vector<FrameEntry> out(sink_.begin(), sink_.end());
  out.insert(out.end(), rolling_.begin(), rolling_.end());
  return out;
}

std::vector<std::int64_t> KvWindow::context_indices() const {
  std::vector<std::int64_t> out;
  out.reserve(size());
  for (const auto& f : sink_) out.push_back(f.index);
  for (const auto& f : rolling_) out.push_back(f.index);
  return out;
}

std::string format_context_line(std::size_t step, const std::vector<std::int64_t>& indices) {
  std::string line = std::to_string(step);
  for (auto i : indices) {
    line += ',';
    line += std::to_string(i);
  }
  return line;
}

}  // namespace flex
