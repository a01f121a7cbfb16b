#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "martgap/tree.hpp"

namespace martgap {

struct RuleNode;
using RulePtr = std::shared_ptr<const RuleNode>;

/// Stopping-rule trie aligned with the tree it applies to: children[j]
/// mirrors the j-th tree edge. A null child means the rule never stops
/// anywhere below that edge (tau = infinity on those paths). Stop nodes have
/// no stopping descendants, which makes the stop set an antichain by
/// construction. Rule nodes may be shared the same way tree nodes are.
struct RuleNode {
  bool stop = false;
  std::vector<RulePtr> children;

  RulePtr child(std::size_t j) const {
    return j < children.size() ? children[j] : nullptr;
  }
};

enum class Decision { Stop, Continue, Abstain };

class StoppingRule {
 public:
  StoppingRule() = default;  // all-abstain
  explicit StoppingRule(RulePtr root) : root_(std::move(root)) {}

  /// Builds the trie from explicit stop paths (child indices from the root).
  /// Rejects the empty path (stopping at the root is tau = 0) and any pair of
  /// nested paths, which would break the antichain property.
  static StoppingRule from_stop_paths(const std::vector<std::vector<int>>& paths);

  const RulePtr& root() const { return root_; }

  /// Stop paths in lexicographic order.
  std::vector<std::vector<int>> stop_paths() const;

  /// STOP at a marked node, CONTINUE where some descendant stops, ABSTAIN
  /// otherwise (including everywhere under a null branch).
  Decision decision(const std::vector<int>& path) const;

 private:
  RulePtr root_;
};

enum class Norm { L1, L2 };

/// E[|X_tau - X_{tau-1}|^l] for the rule's stop set; ABSTAIN paths contribute
/// nothing. Throws std::invalid_argument when the rule does not fit the tree
/// or stops at the root.
double score_of_rule(const NodePtr& tree, const StoppingRule& rule, Norm norm);

/// True iff every root-to-leaf path contains exactly one STOP node.
bool is_maximal(const NodePtr& tree, const StoppingRule& rule);

/// Seeded sample of maximal rules: an independent stop/continue coin per
/// internal child, forced stops at leaf children. Deterministic in the seed.
std::vector<StoppingRule> sample_maximal_rules(const NodePtr& tree, int count,
                                               std::uint64_t seed);

}  // namespace martgap
