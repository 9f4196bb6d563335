// Alternative ways of turning a proposal set into one executed chunk, used
// by the selection-strategy ablation.

#pragma once

#include <optional>
#include <string>

#include "choice/numerics/rng.hpp"
#include "choice/policy/types.hpp"

namespace choice::baselines {

enum class SelectionKind {
  kScore,   // argmin predicted score (the default policy behavior)
  kRandom,  // uniform seeded pick
  kMean,    // entrywise average of all proposals
  kSingle,  // fixed proposal index for the whole run
};

struct SelectionStrategy {
  SelectionKind kind = SelectionKind::kScore;
  int single_index = 0;  // used by kSingle only

  static SelectionStrategy score() { return {SelectionKind::kScore, 0}; }
  static SelectionStrategy random() { return {SelectionKind::kRandom, 0}; }
  static SelectionStrategy mean() { return {SelectionKind::kMean, 0}; }
  static SelectionStrategy single(int k) { return {SelectionKind::kSingle, k}; }

  std::string name() const;
};

std::optional<SelectionStrategy> parse_selection(const std::string& name);

struct Selection {
  policy::ActionChunk chunk;
  int index;  // selected proposal, or -1 for the mean strategy
};

Selection select_with_strategy(const policy::ProposalSet& set,
                               const SelectionStrategy& strategy, num::Rng& rng);

}  // namespace choice::baselines
