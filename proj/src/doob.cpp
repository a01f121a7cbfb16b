#include "martgap/doob.hpp"

#include <cmath>
#include <stdexcept>

namespace martgap {

namespace {

NodePtr build(const std::vector<int>& sizes, const DistOracle& dist, const OutcomeFn& outcome,
              const std::set<int>& event, std::vector<int>& prefix) {
  const std::size_t level = prefix.size();
  if (level == sizes.size()) {
    return make_leaf(event.count(outcome(prefix)) ? 1.0 : 0.0);
  }
  const int width = sizes[level];
  const std::vector<double> probs = dist(prefix);
  if (static_cast<int>(probs.size()) != width) {
    throw std::invalid_argument("doob_from_outcome: distribution size does not match alphabet");
  }
  double psum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("doob_from_outcome: negative or non-finite probability");
    }
    psum += p;
  }
  if (std::fabs(psum - 1.0) > 1e-9) {
    throw std::invalid_argument("doob_from_outcome: distribution is not normalized");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(width));
  double value = 0.0;
  for (int e = 0; e < width; ++e) {
    prefix.push_back(e);
    NodePtr child = build(sizes, dist, outcome, event, prefix);
    prefix.pop_back();
    value += probs[static_cast<std::size_t>(e)] * child->value;
    edges.push_back({probs[static_cast<std::size_t>(e)], std::move(child)});
  }
  return make_node(value, std::move(edges));
}

}  // namespace

NodePtr doob_from_outcome(const std::vector<int>& alphabet_sizes, const DistOracle& dist,
                          const OutcomeFn& outcome, const std::set<int>& event) {
  for (int s : alphabet_sizes) {
    if (s < 1) throw std::invalid_argument("doob_from_outcome: empty alphabet");
  }
  std::vector<int> prefix;
  return build(alphabet_sizes, dist, outcome, event, prefix);
}

}  // namespace martgap
