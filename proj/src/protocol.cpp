#include "martgap/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "martgap/scores.hpp"
#include "martgap/transforms.hpp"

namespace martgap {

namespace {

NodePtr constant_chain(double v, int levels) {
  NodePtr node = make_leaf(v);
  for (int i = 0; i < levels; ++i) {
    node = make_node(v, {{1.0, std::move(node)}});
  }
  return node;
}

NodePtr build_rec(double v, int levels, TransformIterates& curves) {
  if (v <= 0.0 || v >= 1.0) {
    return constant_chain(v <= 0.0 ? 0.0 : 1.0, levels);
  }
  if (levels == 1) {
    return make_node(v, {{1.0 - v, make_leaf(0.0)}, {v, make_leaf(1.0)}});
  }
  const Curve& c = curves.get(levels - 1);
  const double xs = detail::solve_left_unchecked(c, v);
  const double xl = detail::solve_right_unchecked(c, v);
  if (!(xl - xs > 1e-12)) {
    return constant_chain(v < 0.5 ? 0.0 : 1.0, levels);
  }
  const double p_left = (xl - v) / (xl - xs);
  return make_node(v, {{p_left, build_rec(xs, levels - 1, curves)},
                       {1.0 - p_left, build_rec(xl, levels - 1, curves)}});
}

}  // namespace

NodePtr build_optimal(double x0, int n, TransformIterates& curves, int depth_cap) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw std::invalid_argument("build_optimal: x0 outside [0,1]");
  if (n < 1) throw std::invalid_argument("build_optimal: n must be >= 1");
  if (n > depth_cap) {
    throw std::invalid_argument("build_optimal: depth " + std::to_string(n) +
                                " exceeds the cap of " + std::to_string(depth_cap) +
                                " (the tree is materialized with 2^n nodes)");
  }
  return build_rec(x0, n, curves);
}

NodePtr build_optimal(double x0, int n, int resolution, int depth_cap) {
  TransformIterates curves(SeedKind::C, resolution);
  return build_optimal(x0, n, curves, depth_cap);
}

NodePtr build_threshold(int n, int k) {
  if (n < 1) throw std::invalid_argument("build_threshold: n must be >= 1");
  if (n > 1000) throw std::invalid_argument("build_threshold: n too large");
  if (k < 0 || k > n + 1) {
    throw std::invalid_argument("build_threshold: k must be in [0, n+1]");
  }
  // tail[m][t] = P[Binomial(m, 1/2) >= t]; halving recursion keeps the
  // dyadic values exact as long as they fit a double mantissa
  std::vector<std::vector<double>> tail(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    tail[static_cast<std::size_t>(m)].assign(static_cast<std::size_t>(m) + 2, 0.0);
    for (int t = 0; t <= m + 1; ++t) {
      double v = 0.0;
      if (t <= 0) {
        v = 1.0;
      } else if (t > m) {
        v = 0.0;
      } else {
        v = 0.5 * (tail[static_cast<std::size_t>(m) - 1][static_cast<std::size_t>(t)] +
                   tail[static_cast<std::size_t>(m) - 1][static_cast<std::size_t>(t) - 1]);
      }
      tail[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)] = v;
    }
  }
  const auto tail_at = [&](int m, int t) {
    if (t <= 0) return 1.0;
    if (t > m) return 0.0;
    return tail[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)];
  };

  // nodes shared by (bits seen, ones seen)
  std::vector<std::vector<NodePtr>> memo(static_cast<std::size_t>(n) + 1);
  for (int i = n; i >= 0; --i) {
    memo[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(i) + 1);
    for (int ones = 0; ones <= i; ++ones) {
      NodePtr node;
      if (i == n) {
        node = make_leaf(ones >= k ? 1.0 : 0.0);
      } else {
        node = make_node(tail_at(n - i, k - ones),
                         {{0.5, memo[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(ones)]},
                          {0.5, memo[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(ones) + 1]}});
      }
      memo[static_cast<std::size_t>(i)][static_cast<std::size_t>(ones)] = std::move(node);
    }
  }
  return memo[0][0];
}

NodePtr build_majority(int n) {
  if (n < 1 || n % 2 == 0) {
    throw std::invalid_argument("build_majority: n must be odd and >= 1");
  }
  return build_threshold(n, (n + 1) / 2);
}

double insecurity(const NodePtr& tree) {
  const DirectionalReport d = directional_susceptibility(tree);
  return std::max(d.up, d.down);
}

std::int64_t processors_needed(double x0, double eps, InsecurityModel model) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("processors_needed: eps must be in (0,1)");
  }
  if (model == InsecurityModel::MajorityAsymptotic) x0 = 0.5;
  if (!(x0 > 0.0 && x0 < 1.0)) {
    throw std::invalid_argument("processors_needed: x0 must be in (0,1)");
  }
  const auto deviation = [&](std::int64_t n) {
    if (model == InsecurityModel::OptimalUpper) {
      return 0.5 * std::sqrt(x0 * (1.0 - x0) / static_cast<double>(n));
    }
    return 1.0 / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(n));
  };
  // tiny relative slack so that exact-threshold inputs are not lost to
  // rounding of the closed-form estimate
  const double target = eps * (1.0 + 1e-12);
  double estimate = (model == InsecurityModel::OptimalUpper)
                        ? x0 * (1.0 - x0) / (4.0 * eps * eps)
                        : 1.0 / (2.0 * std::numbers::pi * eps * eps);
  std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(estimate)) - 2);
  while (deviation(n) > target) ++n;
  while (n > 1 && deviation(n - 1) <= target) --n;
  return n;
}

}  // namespace martgap
