#include "choice/loco/history.hpp"

namespace choice::loco {

HistoryBuffer::HistoryBuffer() : ring_(kHistoryFrames, ObservationFrame49{}) {}

void HistoryBuffer::push(const ObservationFrame49& frame) {
  ring_[static_cast<std::size_t>(next_)] = frame;
  next_ = (next_ + 1) % kHistoryFrames;
  if (fill_count_ < kHistoryFrames) ++fill_count_;
}

std::vector<double> HistoryBuffer::flatten() const {
  std::vector<double> out;
  out.reserve(kPolicyInputDim);
  for (int i = 0; i < kHistoryFrames; ++i) {
    const ObservationFrame49& f = ring_[static_cast<std::size_t>((next_ + i) % kHistoryFrames)];
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

std::vector<double> push_and_flatten(HistoryBuffer& buffer, const ObservationFrame49& frame) {
  buffer.push(frame);
  return buffer.flatten();
}

}  // namespace choice::loco
