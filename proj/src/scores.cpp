#include "martgap/scores.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace martgap {

namespace {

double gap(double child, double parent, Norm norm) {
  const double d = child - parent;
  return norm == Norm::L1 ? std::fabs(d) : d * d;
}

RulePtr stop_node() {
  auto r = std::make_shared<RuleNode>();
  r->stop = true;
  return r;
}

struct DpResult {
  double value = 0.0;
  RulePtr rule;  // null below leaves
};

using DpMemo = std::unordered_map<const TreeNode*, DpResult>;

DpResult max_rec(const TreeNode& t, Norm norm, DpMemo& memo) {
  auto it = memo.find(&t);
  if (it != memo.end()) return it->second;
  DpResult res;
  if (!t.is_leaf()) {
    auto rule = std::make_shared<RuleNode>();
    rule->children.resize(t.edges.size());
    for (std::size_t j = 0; j < t.edges.size(); ++j) {
      const Edge& e = t.edges[j];
      const double g = gap(e.node->value, t.value, norm);
      const DpResult sub = max_rec(*e.node, norm, memo);
      if (g >= sub.value) {
        res.value += e.p * g;
        rule->children[j] = stop_node();
      } else {
        res.value += e.p * sub.value;
        rule->children[j] = sub.rule;
      }
    }
    res.rule = std::move(rule);
  }
  memo[&t] = res;
  return res;
}

DpResult min_rec(const TreeNode& t, Norm norm, DpMemo& memo) {
  auto it = memo.find(&t);
  if (it != memo.end()) return it->second;
  DpResult res;
  if (t.is_leaf()) {
    // no maximal rule fits strictly inside an empty subtree, so a parent
    // must stop at this node
    res.value = std::numeric_limits<double>::infinity();
  } else {
    auto rule = std::make_shared<RuleNode>();
    rule->children.resize(t.edges.size());
    for (std::size_t j = 0; j < t.edges.size(); ++j) {
      const Edge& e = t.edges[j];
      const double g = gap(e.node->value, t.value, norm);
      const DpResult sub = min_rec(*e.node, norm, memo);
      if (sub.value <= g) {
        res.value += e.p * sub.value;
        rule->children[j] = sub.rule;
      } else {
        res.value += e.p * g;
        rule->children[j] = stop_node();
      }
    }
    res.rule = std::move(rule);
  }
  memo[&t] = res;
  return res;
}

struct DirResult {
  double value = 0.0;
  RulePtr rule;
};

// sign +1 computes Up (gain parent - child), sign -1 computes Down.
DirResult dir_rec(const TreeNode& t, double sign, std::unordered_map<const TreeNode*, DirResult>& memo) {
  auto it = memo.find(&t);
  if (it != memo.end()) return it->second;
  DirResult res;
  if (!t.is_leaf()) {
    auto rule = std::make_shared<RuleNode>();
    rule->children.resize(t.edges.size());
    for (std::size_t j = 0; j < t.edges.size(); ++j) {
      const Edge& e = t.edges[j];
      const double g = sign * (t.value - e.node->value);
      const DirResult sub = dir_rec(*e.node, sign, memo);
      if (g >= sub.value && g > 0.0) {
        res.value += e.p * g;
        rule->children[j] = stop_node();
      } else if (sub.value > 0.0) {
        res.value += e.p * sub.value;
        rule->children[j] = sub.rule;
      }
      // otherwise abstain below this edge: null child, zero gain
    }
    res.rule = std::move(rule);
  }
  memo[&t] = res;
  return res;
}

double ssi_rec(const TreeNode& t, std::unordered_map<const TreeNode*, double>& memo) {
  auto it = memo.find(&t);
  if (it != memo.end()) return it->second;
  double acc = 0.0;
  for (const Edge& e : t.edges) {
    const double d = e.node->value - t.value;
    acc += e.p * (d * d + ssi_rec(*e.node, memo));
  }
  memo[&t] = acc;
  return acc;
}

}  // namespace

ScoreReport max_score(const NodePtr& tree, Norm norm) {
  require_valid(tree);
  DpMemo memo;
  const DpResult r = max_rec(*tree, norm, memo);
  return {r.value, norm, StoppingRule(r.rule)};
}

ScoreReport min_score(const NodePtr& tree, Norm norm) {
  require_valid(tree);
  if (tree->is_leaf()) return {0.0, norm, StoppingRule()};
  DpMemo memo;
  const DpResult r = min_rec(*tree, norm, memo);
  return {r.value, norm, StoppingRule(r.rule)};
}

DirectionalReport directional_susceptibility(const NodePtr& tree) {
  require_valid(tree);
  std::unordered_map<const TreeNode*, DirResult> up_memo, down_memo;
  const DirResult up = dir_rec(*tree, +1.0, up_memo);
  const DirResult down = dir_rec(*tree, -1.0, down_memo);
  return {up.value, down.value, StoppingRule(up.rule), StoppingRule(down.rule)};
}

double sum_squared_increments(const NodePtr& tree) {
  require_valid(tree);
  std::unordered_map<const TreeNode*, double> memo;
  return ssi_rec(*tree, memo);
}

}  // namespace martgap
