#include "martgap/tree.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace martgap {

namespace {

constexpr double kProbTol = 1e-9;

std::string path_string(const std::vector<int>& path) {
  if (path.empty()) return "root";
  std::string s = "root";
  for (int i : path) {
    s += '/';
    s += std::to_string(i);
  }
  return s;
}

struct Validator {
  bool uniform_depth;
  bool two_party;
  std::vector<Violation> violations;
  std::unordered_set<const TreeNode*> visited;
  // depth below a node; -1 marks mixed leaf depths in the subtree
  std::unordered_map<const TreeNode*, int> depth_below;
  bool turns_expected = false;

  void report(const std::vector<int>& path, std::string message) {
    violations.push_back({path, std::move(message)});
  }

  int walk(const TreeNode& node, std::vector<int>& path) {
    auto it = depth_below.find(&node);
    if (it != depth_below.end()) return it->second;

    if (!std::isfinite(node.value)) {
      report(path, "node value is not finite");
    } else if (node.is_leaf()) {
      if (node.value != 0.0 && node.value != 1.0) {
        report(path, "leaf value must be exactly 0 or 1");
      }
    } else if (node.value < 0.0 || node.value > 1.0) {
      report(path, "node value outside [0,1]");
    }

    int depth = 0;
    if (!node.is_leaf()) {
      double psum = 0.0;
      double mean = 0.0;
      bool child_mixed = false;
      int child_depth = -2;
      for (std::size_t j = 0; j < node.edges.size(); ++j) {
        const Edge& e = node.edges[j];
        if (!e.node) {
          report(path, "edge " + std::to_string(j) + " has no child");
          continue;
        }
        if (!(e.p >= 0.0 && e.p <= 1.0) || !std::isfinite(e.p)) {
          report(path, "edge " + std::to_string(j) + " probability outside [0,1]");
        }
        psum += e.p;
        mean += e.p * e.node->value;
        path.push_back(static_cast<int>(j));
        const int d = walk(*e.node, path);
        path.pop_back();
        if (d < 0) {
          child_mixed = true;
        } else if (child_depth == -2) {
          child_depth = d;
        } else if (child_depth != d) {
          child_mixed = true;
        }
      }
      if (std::fabs(psum - 1.0) > kProbTol) {
        report(path, "edge probabilities sum to " + std::to_string(psum));
      }
      if (std::fabs(mean - node.value) > kProbTol) {
        report(path, "martingale mean violated: children average " + std::to_string(mean) +
                         " but node value is " + std::to_string(node.value));
      }
      if (child_mixed) {
        depth = -1;
        if (uniform_depth) report(path, "leaves at unequal depth below this node");
      } else {
        depth = child_depth + 1;
      }

      if (two_party) {
        if (!node.defense.has_value()) {
          report(path, "internal node is missing a defense value");
        } else if (!(*node.defense >= 0.0 && *node.defense <= 1.0)) {
          report(path, "defense value outside [0,1]");
        }
        if (node.turn.has_value() != turns_expected) {
          report(path, turns_expected ? "missing turn label" : "unexpected turn label");
        }
        if (node.turn.has_value()) {
          for (const Edge& e : node.edges) {
            if (e.node && !e.node->is_leaf() && e.node->turn.has_value() &&
                *e.node->turn == *node.turn) {
              report(path, "turn labels do not alternate");
              break;
            }
          }
        }
      }
    }

    visited.insert(&node);
    depth_below[&node] = depth;
    return depth;
  }
};

}  // namespace

NodePtr make_leaf(double value) {
  auto n = std::make_shared<TreeNode>();
  n->value = value;
  return n;
}

NodePtr make_node(double value, std::vector<Edge> edges, std::optional<double> defense,
                  std::optional<Turn> turn) {
  auto n = std::make_shared<TreeNode>();
  n->value = value;
  n->edges = std::move(edges);
  n->defense = defense;
  n->turn = turn;
  return n;
}

std::string to_string(const Violation& v) {
  return path_string(v.path) + ": " + v.message;
}

std::vector<Violation> validate(const NodePtr& root, bool uniform_depth) {
  if (!root) return {{{}, "tree is empty"}};
  Validator v{uniform_depth, /*two_party=*/false, {}, {}, {}, false};
  std::vector<int> path;
  v.walk(*root, path);
  return std::move(v.violations);
}

std::vector<Violation> validate_two_party(const NodePtr& root) {
  if (!root) return {{{}, "tree is empty"}};
  Validator v{/*uniform_depth=*/true, /*two_party=*/true, {}, {}, {}, false};
  v.turns_expected = root->turn.has_value();
  std::vector<int> path;
  v.walk(*root, path);
  return std::move(v.violations);
}

void require_valid(const NodePtr& root, bool uniform_depth) {
  const auto v = validate(root, uniform_depth);
  if (!v.empty()) {
    throw std::invalid_argument("invalid martingale tree: " + to_string(v.front()));
  }
}

void require_valid_two_party(const NodePtr& root) {
  const auto v = validate_two_party(root);
  if (!v.empty()) {
    throw std::invalid_argument("invalid two-party tree: " + to_string(v.front()));
  }
}

namespace {

int depth_rec(const TreeNode& node, std::unordered_map<const TreeNode*, int>& memo) {
  auto it = memo.find(&node);
  if (it != memo.end()) return it->second;
  int d = 0;
  for (const Edge& e : node.edges) {
    if (e.node) d = std::max(d, 1 + depth_rec(*e.node, memo));
  }
  memo[&node] = d;
  return d;
}

// -1 when leaf depths differ below the node
int uniform_rec(const TreeNode& node, std::unordered_map<const TreeNode*, int>& memo) {
  auto it = memo.find(&node);
  if (it != memo.end()) return it->second;
  int d = node.is_leaf() ? 0 : -2;
  for (const Edge& e : node.edges) {
    if (!e.node) continue;
    const int c = uniform_rec(*e.node, memo);
    if (c < 0) {
      d = -1;
      break;
    }
    if (d == -2) {
      d = c + 1;
    } else if (d != c + 1) {
      d = -1;
      break;
    }
  }
  memo[&node] = d;
  return d;
}

void count_rec(const TreeNode& node, std::unordered_set<const TreeNode*>& seen) {
  if (!seen.insert(&node).second) return;
  for (const Edge& e : node.edges) {
    if (e.node) count_rec(*e.node, seen);
  }
}

}  // namespace

int tree_depth(const NodePtr& root) {
  if (!root) return 0;
  std::unordered_map<const TreeNode*, int> memo;
  return depth_rec(*root, memo);
}

bool has_uniform_depth(const NodePtr& root) {
  if (!root) return true;
  std::unordered_map<const TreeNode*, int> memo;
  return uniform_rec(*root, memo) >= 0;
}

std::size_t node_count(const NodePtr& root) {
  if (!root) return 0;
  std::unordered_set<const TreeNode*> seen;
  count_rec(*root, seen);
  return seen.size();
}

Turn turn_at_depth(const TreeNode& node, int depth) {
  if (node.turn.has_value()) return *node.turn;
  return (depth % 2 == 0) ? Turn::A : Turn::B;
}

}  // namespace martgap
