#include <cmath>

#include "doctest.h"
#include "martgap/attacks.hpp"
#include "martgap/curve_family.hpp"
#include "martgap/protocol.hpp"
#include "martgap/scores.hpp"
#include "test_support.hpp"

using namespace martgap;
using testsupport::DefensePolicy;
using testsupport::Rng;

namespace {

NodePtr depth1(double x, double defense) {
  return make_node(x, {{1.0 - x, make_leaf(0.0)}, {x, make_leaf(1.0)}}, defense, Turn::A);
}

}  // namespace

TEST_CASE("restart attack on the single fair bit") {
  const NodePtr coin = make_node(0.5, {{0.5, make_leaf(0.0)}, {0.5, make_leaf(1.0)}});
  const RestartAttack up = restart_attack(coin, Direction::Up);
  CHECK(up.deviation == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(up.strategy.stop_paths() == std::vector<std::vector<int>>{{0}});
  const RestartAttack down = restart_attack(coin, Direction::Down);
  CHECK(down.deviation == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(down.strategy.stop_paths() == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("restart attack on the majority tree and a deterministic tree") {
  CHECK(restart_attack(build_majority(3), Direction::Up).deviation ==
        doctest::Approx(0.1875).epsilon(1e-12));
  const NodePtr det = make_node(0.0, {{1.0, make_leaf(0.0)}});
  CHECK(restart_attack(det, Direction::Up).deviation == 0.0);
  CHECK(restart_attack(det, Direction::Down).deviation == 0.0);
}

TEST_CASE("specialized stopping on a depth-1 tree scores x(1-x)") {
  for (double x : {0.1, 0.3, 0.5, 0.8}) {
    const NodePtr tree = make_node(x, {{1.0 - x, make_leaf(0.0)}, {x, make_leaf(1.0)}});
    CHECK(specialized_max_score(tree).score == doctest::Approx(x * (1.0 - x)).epsilon(1e-12));
  }
  const NodePtr det = make_node(1.0, {{1.0, make_leaf(1.0)}});
  CHECK(specialized_max_score(det).score == 0.0);
}

TEST_CASE("specialized score clears the iterated curve and stays below the max score") {
  TransformIterates cprime(SeedKind::Cprime, 10000);
  const NodePtr opt = build_optimal(0.5, 3, 10000);
  const SpecializedScore s = specialized_max_score(opt);
  CHECK(s.score >= cprime.get(3).eval(0.5) - 1e-3);
  CHECK(s.score <= max_score(opt, Norm::L1).score + 1e-12);
  CHECK(score_of_rule(opt, s.rule, Norm::L1) == doctest::Approx(s.score).epsilon(1e-12));

  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const int depth = 1 + rng.below(5);
    const NodePtr tree = testsupport::random_uniform_tree(rng, rng.real(), depth, 3);
    const SpecializedScore spec = specialized_max_score(tree);
    REQUIRE(spec.score <= max_score(tree, Norm::L1).score + 1e-12);
    REQUIRE(spec.score >= cprime.get(depth).eval(tree->value) - 1e-3);
    REQUIRE(score_of_rule(tree, spec.rule, Norm::L1) ==
            doctest::Approx(spec.score).epsilon(1e-12));
  }
}

TEST_CASE("fail-stop base cases resolve against the defense") {
  const FailStopReport heads = failstop_attack(depth1(0.5, 0.5), 1000);
  CHECK(heads.s_prime == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(heads.rule.stop_paths() == std::vector<std::vector<int>>{{0}});
  CHECK(heads.bound == doctest::Approx(0.25 / 3.0).epsilon(1e-6));

  const FailStopReport tails = failstop_attack(depth1(0.3, 0.2), 1000);
  CHECK(tails.s_prime == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(tails.rule.stop_paths() == std::vector<std::vector<int>>{{1}});

  const FailStopReport empty = failstop_attack(depth1(0.0, 0.0), 1000);
  CHECK(empty.s_prime == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fail-stop attack clears a third of the iterated curve on random trees") {
  TransformIterates cprime(SeedKind::Cprime, 10000);
  Rng rng(4242);
  for (DefensePolicy policy :
       {DefensePolicy::NodeValue, DefensePolicy::Rounded, DefensePolicy::Random}) {
    for (int i = 0; i < 50; ++i) {
      const int depth = 1 + rng.below(6);
      const NodePtr tree = testsupport::random_two_party_tree(rng, depth, 3, policy);
      const FailStopReport report = failstop_attack(tree, 10000);
      const double bound = cprime.get(depth).eval(tree->value) / 3.0;
      REQUIRE(report.bound == doctest::Approx(bound).epsilon(1e-12));
      REQUIRE(report.s_prime >= bound - 1e-3);
      // the reported score is the honest S' of the reported rule
      REQUIRE(score_sprime(tree, report.rule) ==
              doctest::Approx(report.s_prime).epsilon(1e-9));
      // the split is an exact decomposition
      const double total =
          report.split[0] + report.split[1] + report.split[2] + report.split[3];
      REQUIRE(total == doctest::Approx(report.s_prime).epsilon(1e-9));
      const auto best = best_party_attack(report);
      REQUIRE(best.second >= report.s_prime / 4.0 - 1e-12);
    }
  }
}

TEST_CASE("fail-stop score evaluation is the grouped absolute sum") {
  const NodePtr tree = depth1(0.5, 0.5);
  // stopping both leaves cancels within the parent group
  CHECK(score_sprime(tree, StoppingRule::from_stop_paths({{0}, {1}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(score_sprime(tree, StoppingRule::from_stop_paths({{0}})) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(score_sprime(tree, StoppingRule()) == 0.0);
}

TEST_CASE("best party attack order and tie-breaking") {
  FailStopReport report;
  report.split = {0.25, 0.0, 0.0, 0.0};
  report.s_prime = 0.25;
  CHECK(best_party_attack(report).first == AttackParty::APlus);
  CHECK(best_party_attack(report).second == doctest::Approx(0.25));

  report.split = {0.1, 0.1, 0.1, 0.1};
  CHECK(best_party_attack(report).first == AttackParty::APlus);

  report.split = {0.0, 0.1, 0.1, 0.0};
  CHECK(best_party_attack(report).first == AttackParty::AMinus);
}

TEST_CASE("two-party view of the depth-3 optimal tree yields a twelfth of L'") {
  testsupport::Rng rng(1);
  const NodePtr tree =
      testsupport::decorate_two_party(build_optimal(0.5, 3, 10000), rng,
                                      DefensePolicy::NodeValue, 0);
  const FailStopReport report = failstop_attack(tree, 10000);
  const auto best = best_party_attack(report);
  const double lprime = std::sqrt(2.0 / 4.0) * 0.25;
  CHECK(best.second >= lprime / 12.0 - 1e-3);
}

TEST_CASE("iterated one-sided curves dominate their closed-form floor") {
  TransformIterates cprime(SeedKind::Cprime, 10000);
  for (int n = 1; n <= 32; ++n) {
    const Curve& cn = cprime.get(n);
    const double a = std::sqrt(2.0 / (n + 1.0));
    for (int i = 0; i <= 100; ++i) {
      const double x = i / 100.0;
      REQUIRE(cn.eval(x) >= a * x * (1.0 - x) - 1e-6);
      // and they stay below min(x, 1-x), which the attack recursion leans on
      REQUIRE(cn.eval(x) <= std::min(x, 1.0 - x) + 1e-9);
    }
  }
}

TEST_CASE("fail-stop attack demands a complete two-party tree") {
  const NodePtr bare = make_node(0.5, {{0.5, make_leaf(0.0)}, {0.5, make_leaf(1.0)}});
  CHECK_THROWS_AS(failstop_attack(bare, 1000), std::invalid_argument);
}
