#include "martgap/attacks.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace martgap {

namespace {

constexpr double kMarkSlack = 1e-9;

RulePtr stop_node() {
  auto r = std::make_shared<RuleNode>();
  r->stop = true;
  return r;
}

struct SpecResult {
  double score = 0.0;
  RulePtr rule;
};

SpecResult spec_rec(const TreeNode& t, std::unordered_map<const TreeNode*, SpecResult>& memo) {
  auto it = memo.find(&t);
  if (it != memo.end()) return it->second;
  SpecResult res;
  if (!t.is_leaf()) {
    const std::size_t m = t.edges.size();
    std::vector<SpecResult> sub(m);
    for (std::size_t j = 0; j < m; ++j) sub[j] = spec_rec(*t.edges[j].node, memo);

    const double x = t.value;
    double best = 0.0;
    for (std::size_t j = 0; j < m; ++j) best += t.edges[j].p * sub[j].score;
    int best_side = 0;  // 0 none, -1 left cut, +1 right cut
    double best_cut = 0.0;

    // left cuts: stop every child at or below a child value <= x
    for (std::size_t c = 0; c < m; ++c) {
      const double cut = t.edges[c].node->value;
      if (cut > x) continue;
      double v = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double xj = t.edges[j].node->value;
        v += t.edges[j].p * (xj <= cut ? x - xj : sub[j].score);
      }
      if (v > best) {
        best = v;
        best_side = -1;
        best_cut = cut;
      }
    }
    // right cuts: stop every child at or above a child value >= x
    for (std::size_t c = 0; c < m; ++c) {
      const double cut = t.edges[c].node->value;
      if (cut < x) continue;
      double v = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double xj = t.edges[j].node->value;
        v += t.edges[j].p * (xj >= cut ? xj - x : sub[j].score);
      }
      if (v > best) {
        best = v;
        best_side = +1;
        best_cut = cut;
      }
    }

    auto rule = std::make_shared<RuleNode>();
    rule->children.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double xj = t.edges[j].node->value;
      const bool stopped = (best_side == -1 && xj <= best_cut) ||
                           (best_side == +1 && xj >= best_cut);
      rule->children[j] = stopped ? stop_node() : sub[j].rule;
    }
    res.score = best;
    res.rule = std::move(rule);
  }
  memo[&t] = res;
  return res;
}

struct FsResult {
  double sprime = 0.0;
  std::array<double, 4> split{};
  RulePtr rule;
};

int split_index(Turn speaker, bool plus) {
  return (speaker == Turn::A ? 0 : 2) + (plus ? 0 : 1);
}

struct FailStopSolver {
  TransformIterates& cprime;
  int total_depth;
  // uniform depth pins every shared node to one depth, so this is sound
  std::unordered_map<const TreeNode*, FsResult> memo;

  FsResult solve(const TreeNode& t, int depth) {
    auto hit = memo.find(&t);
    if (hit != memo.end()) return hit->second;
    FsResult res = solve_uncached(t, depth);
    memo[&t] = res;
    return res;
  }

  FsResult solve_uncached(const TreeNode& t, int depth) {
    FsResult res;
    if (t.is_leaf()) return res;
    const double x = t.value;
    const double defense = *t.defense;
    const Turn speaker = turn_at_depth(t, depth);
    const std::size_t m = t.edges.size();
    const int d = total_depth - depth - 1;  // levels below the children

    auto rule = std::make_shared<RuleNode>();
    rule->children.resize(m);

    if (d == 0) {
      // children are leaves: abort on the side the defense beats
      const double target = defense >= x ? 0.0 : 1.0;
      double group = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (t.edges[j].node->value == target) {
          group += t.edges[j].p * (target - defense);
          rule->children[j] = stop_node();
        }
      }
      res.sprime = std::fabs(group);
      res.split[split_index(speaker, defense >= x)] += res.sprime;
      res.rule = std::move(rule);
      return res;
    }

    std::vector<FsResult> sub(m);
    for (std::size_t j = 0; j < m; ++j) {
      sub[j] = solve(*t.edges[j].node, depth + 1);
    }

    const Curve& curve_d = cprime.get(d);
    std::vector<bool> marked(m, false);
    bool any_marked = false;
    bool parent_abort = false;
    for (std::size_t j = 0; j < m; ++j) {
      const double xj = t.edges[j].node->value;
      marked[j] = std::fabs(x - xj) >= curve_d.eval(xj) - kMarkSlack;
      if (!marked[j]) continue;
      any_marked = true;
      const double pivot = (x + 2.0 * xj) / 3.0;
      if ((xj <= x && defense <= pivot) || (xj >= x && defense >= pivot)) {
        parent_abort = true;
      }
    }

    if (!any_marked) {
      // recurse everywhere
      for (std::size_t j = 0; j < m; ++j) {
        const double p = t.edges[j].p;
        res.sprime += p * sub[j].sprime;
        for (int k = 0; k < 4; ++k) res.split[k] += p * sub[j].split[k];
        rule->children[j] = sub[j].rule;
      }
      res.rule = std::move(rule);
      return res;
    }

    if (parent_abort) {
      // the defense is far enough from the node value: abort before the next
      // message, i.e. stop at every child
      for (std::size_t j = 0; j < m; ++j) rule->children[j] = stop_node();
      res.sprime = std::fabs(x - defense);
      res.split[split_index(speaker, defense >= x)] += res.sprime;
      res.rule = std::move(rule);
      return res;
    }

    // one-sided abort on the marked edges; the side follows the specialized
    // stopping time, scored with the C'_d curve for the recursed children
    bool left_nonempty = false, right_nonempty = false;
    double bracket_left = 0.0, bracket_right = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double p = t.edges[j].p;
      const double xj = t.edges[j].node->value;
      const double cd = curve_d.eval(xj);
      const bool is_left = marked[j] && xj <= x;
      const bool is_right = marked[j] && xj > x;
      left_nonempty = left_nonempty || is_left;
      right_nonempty = right_nonempty || is_right;
      bracket_left += p * (is_left ? x - xj : cd);
      bracket_right += p * (is_right ? xj - x : cd);
    }
    bool take_left;
    if (!right_nonempty) {
      take_left = true;
    } else if (!left_nonempty) {
      take_left = false;
    } else {
      take_left = bracket_left >= bracket_right;
    }

    double group = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double p = t.edges[j].p;
      const double xj = t.edges[j].node->value;
      const bool stopped = marked[j] && (take_left ? xj <= x : xj > x);
      if (stopped) {
        group += p * (xj - defense);
        rule->children[j] = stop_node();
      } else {
        res.sprime += p * sub[j].sprime;
        for (int k = 0; k < 4; ++k) res.split[k] += p * sub[j].split[k];
        rule->children[j] = sub[j].rule;
      }
    }
    res.sprime += std::fabs(group);
    res.split[split_index(speaker, take_left)] += std::fabs(group);
    res.rule = std::move(rule);
    return res;
  }
};

struct PairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const {
    return std::hash<const void*>()(p.first) * 1000003u ^ std::hash<const void*>()(p.second);
  }
};

double sprime_rec(
    const TreeNode& t, const RuleNode& r,
    std::unordered_map<std::pair<const void*, const void*>, double, PairHash>& memo) {
  const auto key = std::make_pair(static_cast<const void*>(&t), static_cast<const void*>(&r));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  if (r.children.size() > t.edges.size()) {
    throw std::invalid_argument("stopping rule does not fit the tree");
  }
  double group = 0.0;
  double rest = 0.0;
  for (std::size_t j = 0; j < r.children.size(); ++j) {
    const RulePtr& rj = r.children[j];
    if (!rj) continue;
    const Edge& e = t.edges[j];
    if (rj->stop) {
      if (!t.defense.has_value()) {
        throw std::invalid_argument("score_sprime: stop under a node without a defense");
      }
      group += e.p * (e.node->value - *t.defense);
    } else {
      rest += e.p * sprime_rec(*e.node, *rj, memo);
    }
  }
  const double total = std::fabs(group) + rest;
  memo[key] = total;
  return total;
}

}  // namespace

const char* to_string(AttackParty p) {
  switch (p) {
    case AttackParty::APlus: return "A+";
    case AttackParty::AMinus: return "A-";
    case AttackParty::BPlus: return "B+";
    case AttackParty::BMinus: return "B-";
  }
  return "?";
}

RestartAttack restart_attack(const NodePtr& tree, Direction direction) {
  DirectionalReport d = directional_susceptibility(tree);
  if (direction == Direction::Up) return {std::move(d.up_rule), d.up};
  return {std::move(d.down_rule), d.down};
}

SpecializedScore specialized_max_score(const NodePtr& tree) {
  require_valid(tree, /*uniform_depth=*/true);
  std::unordered_map<const TreeNode*, SpecResult> memo;
  SpecResult r = spec_rec(*tree, memo);
  return {r.score, StoppingRule(std::move(r.rule))};
}

FailStopReport failstop_attack(const NodePtr& tree, int resolution) {
  require_valid_two_party(tree);
  const int n = tree_depth(tree);
  FailStopReport report;
  if (n == 0) return report;
  TransformIterates cprime(SeedKind::Cprime, resolution);
  FailStopSolver solver{cprime, n, {}};
  FsResult r = solver.solve(*tree, 0);
  report.rule = StoppingRule(std::move(r.rule));
  report.s_prime = r.sprime;
  report.split = r.split;
  report.bound = cprime.get(n).eval(tree->value) / 3.0;
  return report;
}

double score_sprime(const NodePtr& tree, const StoppingRule& rule) {
  require_valid(tree, /*uniform_depth=*/false);
  if (!rule.root()) return 0.0;
  if (rule.root()->stop) {
    throw std::invalid_argument("stopping at the root (tau = 0) is not allowed");
  }
  std::unordered_map<std::pair<const void*, const void*>, double, PairHash> memo;
  return sprime_rec(*tree, *rule.root(), memo);
}

std::pair<AttackParty, double> best_party_attack(const FailStopReport& report) {
  static constexpr AttackParty kOrder[4] = {AttackParty::APlus, AttackParty::AMinus,
                                            AttackParty::BPlus, AttackParty::BMinus};
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (report.split[static_cast<std::size_t>(k)] >
        report.split[static_cast<std::size_t>(best)]) {
      best = k;
    }
  }
  return {kOrder[best], report.split[static_cast<std::size_t>(best)]};
}

}  // namespace martgap
