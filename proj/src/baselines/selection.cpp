#include "choice/baselines/selection.hpp"

#include "choice/policy/choice_policy.hpp"

namespace choice::baselines {

std::string SelectionStrategy::name() const {
  switch (kind) {
    case SelectionKind::kScore: return "score";
    case SelectionKind::kRandom: return "random";
    case SelectionKind::kMean: return "mean";
    case SelectionKind::kSingle: return "single:" + std::to_string(single_index);
  }
  return "?";
}

std::optional<SelectionStrategy> parse_selection(const std::string& name) {
  if (name == "score") return SelectionStrategy::score();
  if (name == "random") return SelectionStrategy::random();
  if (name == "mean") return SelectionStrategy::mean();
  if (name.rfind("single:", 0) == 0) {
    try {
      return SelectionStrategy::single(std::stoi(name.substr(7)));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

Selection select_with_strategy(const policy::ProposalSet& set,
                               const SelectionStrategy& strategy, num::Rng& rng) {
  if (set.proposals.empty()) {
    throw std::invalid_argument("select_with_strategy: empty proposal set");
  }
  switch (strategy.kind) {
    case SelectionKind::kScore: {
      int idx = policy::infer_index(set);
      return {set.proposals[static_cast<std::size_t>(idx)], idx};
    }
    case SelectionKind::kRandom: {
      int idx = rng.uniform_int(set.k());
      return {set.proposals[static_cast<std::size_t>(idx)], idx};
    }
    case SelectionKind::kMean: {
      policy::ActionChunk mean(set.proposals[0].horizon, set.proposals[0].action_dim);
      for (const policy::ActionChunk& p : set.proposals) {
        for (std::size_t i = 0; i < mean.values.size(); ++i) mean.values[i] += p.values[i];
      }
      for (double& v : mean.values) v /= static_cast<double>(set.k());
      return {std::move(mean), -1};
    }
    case SelectionKind::kSingle: {
      if (strategy.single_index < 0 || strategy.single_index >= set.k()) {
        throw std::invalid_argument("select_with_strategy: single index " +
                                    std::to_string(strategy.single_index) +
                                    " out of range for K=" + std::to_string(set.k()));
      }
      return {set.proposals[static_cast<std::size_t>(strategy.single_index)],
              strategy.single_index};
    }
  }
  throw std::logic_error("unreachable selection kind");
}

}  // namespace choice::baselines
