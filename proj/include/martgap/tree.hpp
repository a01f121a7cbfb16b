#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace martgap {

enum class Turn { A, B };

struct TreeNode;
using NodePtr = std::shared_ptr<const TreeNode>;

struct Edge {
  double p = 0.0;
  NodePtr node;
};

/// One node of a finite martingale tree. `value` is the conditional
/// expectation of the final outcome given the transcript so far; leaves carry
/// the outcome itself, exactly 0 or 1. Optional two-party fields: `defense`
/// is the probability the surviving party outputs heads if the next speaker
/// aborts here, `turn` names that speaker. Nodes are immutable after
/// construction and subtrees may be shared (count-deduplicated trees reuse
/// them), so all walks treat them as read-only.
struct TreeNode {
  double value = 0.0;
  std::vector<Edge> edges;
  std::optional<double> defense;
  std::optional<Turn> turn;

  bool is_leaf() const { return edges.empty(); }
};

NodePtr make_leaf(double value);
NodePtr make_node(double value, std::vector<Edge> edges,
                  std::optional<double> defense = std::nullopt,
                  std::optional<Turn> turn = std::nullopt);

struct Violation {
  std::vector<int> path;  // child indices from the root
  std::string message;
};
std::string to_string(const Violation& v);

/// Martingale-tree invariant checker. An empty result means the tree is
/// valid; each violation names the node path and the failed predicate.
/// Violations are data, not errors. Shared subtrees are checked once, at
/// their first path.
std::vector<Violation> validate(const NodePtr& root, bool uniform_depth = false);

/// Uniform depth plus the two-party structure: a defense on every internal
/// node, and turn labels (when present) alternating along every path.
std::vector<Violation> validate_two_party(const NodePtr& root);

/// Throws std::invalid_argument with the first violation if the tree is not
/// a valid martingale tree.
void require_valid(const NodePtr& root, bool uniform_depth = false);
void require_valid_two_party(const NodePtr& root);

/// Longest root-to-leaf path.
int tree_depth(const NodePtr& root);
bool has_uniform_depth(const NodePtr& root);
/// Distinct nodes; shared subtrees counted once.
std::size_t node_count(const NodePtr& root);

/// Turn of the next speaker at a node reached by `depth` edges: the explicit
/// label when present, otherwise parties alternate starting with A at the
/// root.
Turn turn_at_depth(const TreeNode& node, int depth);

}  // namespace martgap
