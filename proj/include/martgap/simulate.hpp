#pragma once

#include <cstdint>

#include "martgap/stopping.hpp"
#include "martgap/tree.hpp"

namespace martgap {

enum class SimMode { RestartUp, RestartDown, FailStop };

struct SimResult {
  double empirical_bias = 0.0;  // mean outcome across trials
  double stderr_bias = 0.0;     // sqrt(p (1-p) / trials)
  std::int64_t trials = 0;
};

/// Monte Carlo replay of an attack. Transcripts are sampled from the tree;
/// when the walk enters a STOP node of the strategy, restart modes redraw
/// that edge once from the parent's full edge distribution and then continue
/// honestly, while fail-stop mode ends the trial with a coin at the parent's
/// defense value. Trials are split over a fixed shard count with per-shard
/// generators seeded seed + shard, so results are byte-identical for a given
/// seed regardless of thread count.
SimResult simulate_attack(const NodePtr& tree, const StoppingRule& strategy, SimMode mode,
                          std::int64_t trials, std::uint64_t seed);

/// Exact expected outcome of the same replay semantics; the prediction the
/// simulator should land within a few standard errors of.
double expected_outcome_under(const NodePtr& tree, const StoppingRule& strategy, SimMode mode);

namespace reference {

/// Single-threaded simulator over the same shards, kept as the oracle for
/// the OpenMP version.
SimResult simulate_attack(const NodePtr& tree, const StoppingRule& strategy, SimMode mode,
                          std::int64_t trials, std::uint64_t seed);

}  // namespace reference

}  // namespace martgap
