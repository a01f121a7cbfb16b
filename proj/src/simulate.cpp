#include "martgap/simulate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace martgap {

namespace {

constexpr int kShards = 64;

// 53-bit uniform in [0,1); bit-for-bit reproducible across standard libraries
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick_edge(const TreeNode& t, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  const std::size_t m = t.edges.size();
  for (std::size_t j = 0; j + 1 < m; ++j) {
    acc += t.edges[j].p;
    if (u < acc) return j;
  }
  return m - 1;
}

double run_trial(const TreeNode& root, const RuleNode* rule, SimMode mode,
                 std::mt19937_64& rng) {
  const TreeNode* node = &root;
  const RuleNode* r = rule;
  bool restarted = false;
  while (!node->is_leaf()) {
    const std::size_t j = pick_edge(*node, rng);
    const RuleNode* rj = r ? r->child(j).get() : nullptr;
    if (rj && rj->stop) {
      if (mode == SimMode::FailStop) {
        if (!node->defense.has_value()) {
          throw std::invalid_argument("simulate_attack: stop under a node without a defense");
        }
        return uniform01(rng) < *node->defense ? 1.0 : 0.0;
      }
      if (!restarted) {
        restarted = true;
        // one fresh sample from the same edge distribution, then honest play
        const std::size_t k = pick_edge(*node, rng);
        node = node->edges[k].node.get();
        r = nullptr;
        continue;
      }
    }
    node = node->edges[j].node.get();
    r = rj;
  }
  return node->value;
}

long long shard_trials(std::int64_t total, int shard) {
  const std::int64_t base = total / kShards;
  return base + (shard < total % kShards ? 1 : 0);
}

SimResult run_shards(const NodePtr& tree, const StoppingRule& strategy, SimMode mode,
                     std::int64_t trials, std::uint64_t seed, bool parallel) {
  if (trials < 1) throw std::invalid_argument("simulate_attack: trials must be >= 1");
  require_valid(tree);
  if (strategy.root() && strategy.root()->stop) {
    throw std::invalid_argument("simulate_attack: strategy stops at the root");
  }
  double sums[kShards] = {};
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < kShards; ++s) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(s));
      double acc = 0.0;
      const long long n = shard_trials(trials, s);
      for (long long i = 0; i < n; ++i) {
        acc += run_trial(*tree, strategy.root().get(), mode, rng);
      }
      sums[s] = acc;
    }
  } else {
    for (int s = 0; s < kShards; ++s) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(s));
      double acc = 0.0;
      const long long n = shard_trials(trials, s);
      for (long long i = 0; i < n; ++i) {
        acc += run_trial(*tree, strategy.root().get(), mode, rng);
      }
      sums[s] = acc;
    }
  }
  double total = 0.0;
  for (int s = 0; s < kShards; ++s) total += sums[s];  // fixed merge order
  const double p = total / static_cast<double>(trials);
  SimResult res;
  res.empirical_bias = p;
  res.stderr_bias = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
  res.trials = trials;
  return res;
}

struct PairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const {
    return std::hash<const void*>()(p.first) * 1000003u ^ std::hash<const void*>()(p.second);
  }
};

double expected_rec(
    const TreeNode& t, const RuleNode* r, SimMode mode,
    std::unordered_map<std::pair<const void*, const void*>, double, PairHash>& memo) {
  if (t.is_leaf()) return t.value;
  if (!r) return t.value;  // honest play from here on
  const auto key = std::make_pair(static_cast<const void*>(&t), static_cast<const void*>(r));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  double acc = 0.0;
  for (std::size_t j = 0; j < t.edges.size(); ++j) {
    const Edge& e = t.edges[j];
    const RuleNode* rj = r->child(j).get();
    if (rj && rj->stop) {
      if (mode == SimMode::FailStop) {
        if (!t.defense.has_value()) {
          throw std::invalid_argument("expected_outcome_under: missing defense");
        }
        acc += e.p * *t.defense;
      } else {
        // the fresh sample restores the conditional expectation of the parent
        acc += e.p * t.value;
      }
    } else {
      acc += e.p * expected_rec(*e.node, rj, mode, memo);
    }
  }
  memo[key] = acc;
  return acc;
}

}  // namespace

SimResult simulate_attack(const NodePtr& tree, const StoppingRule& strategy, SimMode mode,
                          std::int64_t trials, std::uint64_t seed) {
  return run_shards(tree, strategy, mode, trials, seed, /*parallel=*/true);
}

double expected_outcome_under(const NodePtr& tree, const StoppingRule& strategy, SimMode mode) {
  require_valid(tree);
  std::unordered_map<std::pair<const void*, const void*>, double, PairHash> memo;
  return expected_rec(*tree, strategy.root().get(), mode, memo);
}

namespace reference {

SimResult simulate_attack(const NodePtr& tree, const StoppingRule& strategy, SimMode mode,
                          std::int64_t trials, std::uint64_t seed) {
  return run_shards(tree, strategy, mode, trials, seed, /*parallel=*/false);
}

}  // namespace reference

}  // namespace martgap
