#include "martgap/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace martgap {

namespace {

struct MutableRule {
  bool stop = false;
  std::vector<std::unique_ptr<MutableRule>> children;
};

RulePtr freeze(const MutableRule& m) {
  auto node = std::make_shared<RuleNode>();
  node->stop = m.stop;
  node->children.resize(m.children.size());
  for (std::size_t j = 0; j < m.children.size(); ++j) {
    if (m.children[j]) node->children[j] = freeze(*m.children[j]);
  }
  return node;
}

void collect_paths(const RuleNode& r, std::vector<int>& path,
                   std::vector<std::vector<int>>& out) {
  if (r.stop) {
    out.push_back(path);
    return;
  }
  for (std::size_t j = 0; j < r.children.size(); ++j) {
    if (!r.children[j]) continue;
    path.push_back(static_cast<int>(j));
    collect_paths(*r.children[j], path, out);
    path.pop_back();
  }
}

double gap(double child, double parent, Norm norm) {
  const double d = child - parent;
  return norm == Norm::L1 ? std::fabs(d) : d * d;
}

struct PairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const {
    return std::hash<const void*>()(p.first) * 1000003u ^ std::hash<const void*>()(p.second);
  }
};

using PairMemo = std::unordered_map<std::pair<const void*, const void*>, double, PairHash>;

// Expected contribution of the stop set, conditional on reaching `t`.
double score_rec(const TreeNode& t, const RuleNode& r, Norm norm, PairMemo& memo) {
  const auto key = std::make_pair(static_cast<const void*>(&t), static_cast<const void*>(&r));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  if (r.children.size() > t.edges.size()) {
    throw std::invalid_argument("stopping rule does not fit the tree");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < r.children.size(); ++j) {
    const RulePtr& rj = r.children[j];
    if (!rj) continue;
    const Edge& e = t.edges[j];
    if (rj->stop) {
      for (const RulePtr& c : rj->children) {
        if (c) throw std::invalid_argument("stopping rule has a stop below a stop");
      }
      acc += e.p * gap(e.node->value, t.value, norm);
    } else {
      acc += e.p * score_rec(*e.node, *rj, norm, memo);
    }
  }
  memo[key] = acc;
  return acc;
}

using BoolMemo = std::unordered_map<std::pair<const void*, const void*>, bool, PairHash>;

bool maximal_rec(const TreeNode& t, const RuleNode* r, BoolMemo& memo) {
  if (r && r->stop) return true;
  if (t.is_leaf()) return false;  // past every stop with nowhere left to go
  if (!r) return false;
  const auto key = std::make_pair(static_cast<const void*>(&t), static_cast<const void*>(r));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  bool all = true;
  for (std::size_t j = 0; j < t.edges.size() && all; ++j) {
    all = maximal_rec(*t.edges[j].node, r->child(j).get(), memo);
  }
  memo[key] = all;
  return all;
}

RulePtr sample_rule_rec(const TreeNode& t, std::mt19937_64& rng) {
  auto node = std::make_shared<RuleNode>();
  node->children.resize(t.edges.size());
  for (std::size_t j = 0; j < t.edges.size(); ++j) {
    const TreeNode& child = *t.edges[j].node;
    if (child.is_leaf() || (rng() & 1u)) {
      auto stop = std::make_shared<RuleNode>();
      stop->stop = true;
      node->children[j] = std::move(stop);
    } else {
      node->children[j] = sample_rule_rec(child, rng);
    }
  }
  return node;
}

}  // namespace

StoppingRule StoppingRule::from_stop_paths(const std::vector<std::vector<int>>& paths) {
  MutableRule root;
  for (const auto& path : paths) {
    if (path.empty()) {
      throw std::invalid_argument("stopping at the root (tau = 0) is not allowed");
    }
    MutableRule* cur = &root;
    for (int idx : path) {
      if (idx < 0) throw std::invalid_argument("negative child index in stop path");
      if (cur->stop) {
        throw std::invalid_argument("stop paths are not an antichain");
      }
      const auto j = static_cast<std::size_t>(idx);
      if (cur->children.size() <= j) cur->children.resize(j + 1);
      if (!cur->children[j]) cur->children[j] = std::make_unique<MutableRule>();
      cur = cur->children[j].get();
    }
    if (cur->stop || !cur->children.empty()) {
      throw std::invalid_argument("stop paths are not an antichain");
    }
    cur->stop = true;
  }
  return StoppingRule(freeze(root));
}

std::vector<std::vector<int>> StoppingRule::stop_paths() const {
  std::vector<std::vector<int>> out;
  if (root_) {
    std::vector<int> path;
    collect_paths(*root_, path, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Decision StoppingRule::decision(const std::vector<int>& path) const {
  const RuleNode* cur = root_.get();
  for (int idx : path) {
    if (!cur) return Decision::Abstain;
    cur = cur->child(static_cast<std::size_t>(idx)).get();
  }
  if (!cur) return Decision::Abstain;
  if (cur->stop) return Decision::Stop;
  for (const RulePtr& c : cur->children) {
    if (c) return Decision::Continue;
  }
  return Decision::Abstain;
}

double score_of_rule(const NodePtr& tree, const StoppingRule& rule, Norm norm) {
  require_valid(tree);
  if (!rule.root()) return 0.0;
  if (rule.root()->stop) {
    throw std::invalid_argument("stopping at the root (tau = 0) is not allowed");
  }
  PairMemo memo;
  return score_rec(*tree, *rule.root(), norm, memo);
}

bool is_maximal(const NodePtr& tree, const StoppingRule& rule) {
  if (!tree) return false;
  if (rule.root() && rule.root()->stop) return false;
  BoolMemo memo;
  return maximal_rec(*tree, rule.root().get(), memo);
}

std::vector<StoppingRule> sample_maximal_rules(const NodePtr& tree, int count,
                                               std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_maximal_rules: count must be >= 1");
  require_valid(tree);
  if (tree->is_leaf()) {
    throw std::invalid_argument("sample_maximal_rules: tree has no interior to stop in");
  }
  std::mt19937_64 rng(seed);
  std::vector<StoppingRule> rules;
  rules.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    rules.emplace_back(sample_rule_rec(*tree, rng));
  }
  return rules;
}

}  // namespace martgap
