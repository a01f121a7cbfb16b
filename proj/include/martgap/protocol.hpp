#pragma once

#include <cstdint>

#include "martgap/curve_family.hpp"
#include "martgap/tree.hpp"

namespace martgap {

/// Maximum depth for explicitly materialized binary protocol trees (2^n
/// nodes). Overridable per call for callers that accept the memory cost.
inline constexpr int kDefaultProtocolDepthCap = 24;

/// Optimal bias-x0 coin-tossing tree of depth n: a node with value v and
/// d > 1 levels left branches to the chord roots of the depth-(d-1) gap
/// curve, with the edge probabilities chosen so the gap to either child
/// equals the child's own curve value. Depth-1 nodes resolve to {0,1}.
/// Node values that hit exactly 0 or 1 early continue as a constant chain,
/// keeping the depth uniform.
NodePtr build_optimal(double x0, int n, int resolution,
                      int depth_cap = kDefaultProtocolDepthCap);

/// Same, sharing a caller-owned ladder of gap curves (seeded with SeedKind::C).
NodePtr build_optimal(double x0, int n, TransformIterates& curves,
                      int depth_cap = kDefaultProtocolDepthCap);

/// Majority of n fair bits (n odd): depth-n tree, each edge 1/2, node value
/// the binomial tail given the ones seen so far. Subtrees are deduplicated by
/// (depth, #ones).
NodePtr build_majority(int n);

/// Outcome 1 iff #heads >= k among n fair bits; 0 <= k <= n+1.
NodePtr build_threshold(int n, int k);

/// Best outcome shift an adversary gets from restarting one processor once:
/// max of the two directional susceptibilities.
double insecurity(const NodePtr& tree);

enum class InsecurityModel {
  OptimalUpper,         // deviation 0.5 * sqrt(x0 (1-x0) / n)
  MajorityAsymptotic,   // deviation 1 / sqrt(2 pi n), x0 fixed at 1/2
};

/// Smallest number of processors whose deviation bound is at most eps.
std::int64_t processors_needed(double x0, double eps, InsecurityModel model);

}  // namespace martgap
