#pragma once

#include "martgap/stopping.hpp"
#include "martgap/tree.hpp"

namespace martgap {

struct ScoreReport {
  double score = 0.0;
  Norm norm = Norm::L1;
  StoppingRule rule;
};

/// Exact optimum of E[|X_tau - X_{tau-1}|^l] over all stopping rules, by
/// backward induction: each child contributes p * max(gap, subtree optimum).
/// Ties prefer STOP, applied per node in child order.
ScoreReport max_score(const NodePtr& tree, Norm norm);

/// Minimum over maximal stopping rules (every path stops exactly once);
/// same induction with min, ties prefer CONTINUE.
ScoreReport min_score(const NodePtr& tree, Norm norm);

struct DirectionalReport {
  double up = 0.0;    // best expected increase of P[outcome = 1] by one restart
  double down = 0.0;  // best expected decrease
  StoppingRule up_rule;
  StoppingRule down_rule;
};

/// One-restart susceptibility in both directions. Restarting at a node
/// returns the conditional expectation to the parent value, so each child
/// contributes p * max(parent - child, subtree up, 0) upward and the mirror
/// downward. up + down >= max_score(L1) holds term by term.
DirectionalReport directional_susceptibility(const NodePtr& tree);

/// Sum over all edges of path probability * (child - parent)^2. For trees
/// with {0,1} leaves this equals root * (1 - root).
double sum_squared_increments(const NodePtr& tree);

}  // namespace martgap
