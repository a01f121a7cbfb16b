#pragma once

#include <array>
#include <utility>

#include "martgap/curve_family.hpp"
#include "martgap/scores.hpp"
#include "martgap/stopping.hpp"
#include "martgap/tree.hpp"

namespace martgap {

enum class Direction { Up, Down };

struct RestartAttack {
  StoppingRule strategy;  // STOP marks the node whose message gets restarted
  double deviation = 0.0;
};

/// Optimal one-restart strategy in the given direction; the deviation is the
/// directional susceptibility.
RestartAttack restart_attack(const NodePtr& tree, Direction direction);

struct SpecializedScore {
  double score = 0.0;
  StoppingRule rule;
};

/// Best specialized stopping time: at every node the rule stops a one-sided
/// set of children (everything below a left cut, or everything above a right
/// cut) and recurses on the rest. Cuts range over the child values on the
/// chosen side of the node value, which dominates any fixed threshold.
/// Requires a valid uniform-depth tree.
SpecializedScore specialized_max_score(const NodePtr& tree);

enum class AttackParty { APlus, AMinus, BPlus, BMinus };
const char* to_string(AttackParty p);

struct FailStopReport {
  StoppingRule rule;          // abort points
  double s_prime = 0.0;       // per-parent grouped |sum p (child - defense)| score
  std::array<double, 4> split{};  // A+, A-, B+, B- shares; sums to s_prime
  double bound = 0.0;         // C'_n(root) / 3
};

/// Fail-stop attack against a two-party tree. Per node with children d levels
/// above the leaves, edges with |value - child| at or above the C'_d curve
/// (with a small slack so grid error cannot unmark an edge) are marked; then
/// either everything is unmarked and the attack recurses, or the defense is
/// close enough to a marked child that aborting right here already pays, or
/// the attack aborts on the better one-sided marked set and recurses on the
/// rest. Children of depth-1 nodes resolve directly against the defense.
FailStopReport failstop_attack(const NodePtr& tree, int resolution = 10000);

/// Independent evaluation of the fail-stop score for an arbitrary rule:
/// for every parent, the stopped children are grouped, their signed
/// probability-weighted offsets from the parent defense summed, and the
/// absolute group totals added up weighted by the parent path probability.
double score_sprime(const NodePtr& tree, const StoppingRule& rule);

/// Largest of the four split shares; ties break in declaration order.
std::pair<AttackParty, double> best_party_attack(const FailStopReport& report);

}  // namespace martgap
