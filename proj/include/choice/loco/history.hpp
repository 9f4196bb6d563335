// Rolling 30-frame history; the policy input is the concatenation of all 30
// frames, oldest first. The buffer starts zero-filled, so early outputs are
// zero-padded history with the newest frames last.

#pragma once

#include <vector>

#include "choice/loco/frame.hpp"

namespace choice::loco {

inline constexpr int kHistoryFrames = 30;
inline constexpr int kPolicyInputDim = kHistoryFrames * kFrameDim;  // 1470

class HistoryBuffer {
 public:
  HistoryBuffer();

  void push(const ObservationFrame49& frame);

  // Frames oldest -> newest as one flat vector of length 1470.
  std::vector<double> flatten() const;

  int fill_count() const { return fill_count_; }

 private:
  std::vector<ObservationFrame49> ring_;
  int next_ = 0;
  int fill_count_ = 0;
};

std::vector<double> push_and_flatten(HistoryBuffer& buffer, const ObservationFrame49& frame);

}  // namespace choice::loco
