#pragma once

#include <functional>
#include <set>
#include <vector>

#include "martgap/tree.hpp"

namespace martgap {

/// Conditional distribution oracle: given the transcript prefix (e_1..e_i),
/// returns Pr[E_{i+1} = e | prefix] for every symbol of Omega_{i+1}.
using DistOracle = std::function<std::vector<double>(const std::vector<int>& prefix)>;

/// Outcome of a full transcript, an integer die face.
using OutcomeFn = std::function<int(const std::vector<int>& transcript)>;

/// Doob martingale of the event {outcome in S} over the product space
/// described by alphabet_sizes: node value = Pr[outcome in S | prefix],
/// leaves are the indicator of the event. Throws std::invalid_argument when
/// the oracle is unnormalized or sized wrongly for its level.
NodePtr doob_from_outcome(const std::vector<int>& alphabet_sizes, const DistOracle& dist,
                          const OutcomeFn& outcome, const std::set<int>& event);

}  // namespace martgap
