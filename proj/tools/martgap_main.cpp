// Command-line front end: curve computation, protocol building, attack
// execution, verification suites, simulation, and CSV/JSON reports.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "martgap/attacks.hpp"
#include "martgap/curve_family.hpp"
#include "martgap/doob.hpp"
#include "martgap/json_io.hpp"
#include "martgap/protocol.hpp"
#include "martgap/scores.hpp"
#include "martgap/simulate.hpp"
#include "martgap/transforms.hpp"

namespace {

using namespace martgap;
using nlohmann::json;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

// summaries go to stderr when the payload itself is on stdout
std::ostream& summary_stream(const std::string& out_path) {
  return out_path == "-" ? std::cerr : std::cout;
}

json read_json_file(const std::string& path) {
  if (path == "-") {
    return json::parse(std::cin);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return json::parse(in);
}

NodePtr load_tree_or_fail(const std::string& path) {
  return tree_from_json(read_json_file(path));
}

int report_violations(const std::vector<Violation>& violations) {
  for (const Violation& v : violations) {
    std::cerr << "violation: " << to_string(v) << "\n";
  }
  return kExitValidation;
}

struct CurveArgs {
  std::string kind;
  int n = 1;
  int resolution = 10000;
  std::string format = "csv";
  std::string out;
};

Curve make_named_curve(const std::string& kind, int n, int resolution) {
  if (kind == "C") return c_curve(n, resolution, SeedKind::C);
  if (kind == "Cprime") return c_curve(n, resolution, SeedKind::Cprime);
  if (kind == "L") return bound_curve(BoundKind::L, n, resolution);
  if (kind == "U") return bound_curve(BoundKind::U, n, resolution);
  if (kind == "G") return bound_curve(BoundKind::G, n, resolution);
  if (kind == "D") return bound_curve(BoundKind::D, n, resolution);
  if (kind == "Lprime") return bound_curve(BoundKind::Lprime, n, resolution);
  throw CLI::ValidationError("--kind", "unknown curve kind: " + kind);
}

int run_curve(const CurveArgs& a) {
  const Curve c = make_named_curve(a.kind, a.n, a.resolution);
  if (!a.out.empty()) {
    write_output(a.out, a.format == "json" ? c.to_json_string() + "\n" : c.to_csv());
  }
  summary_stream(a.out) << a.kind << "_" << a.n << "(0.5) = " << format6(c.eval(0.5)) << "\n";
  return 0;
}

struct ProtocolArgs {
  std::string kind;
  double x0 = 0.5;
  int n = 0;  // must come from --n or --config
  int k = 0;
  bool k_set = false;
  int resolution = 10000;
  bool force = false;
  std::string config;
  std::string out;
};

// {"kind": ..., "x0": ..., "n": ..., "k": ..., "resolution": ...}
bool apply_protocol_config(ProtocolArgs& a) {
  const json j = read_json_file(a.config);
  if (!j.is_object() || !j.contains("kind") || !j.contains("n")) {
    std::cerr << "error: protocol config needs at least \"kind\" and \"n\"\n";
    return false;
  }
  a.kind = j["kind"].get<std::string>();
  a.n = j["n"].get<int>();
  if (j.contains("x0")) a.x0 = j["x0"].get<double>();
  if (j.contains("k")) {
    a.k = j["k"].get<int>();
    a.k_set = true;
  }
  if (j.contains("resolution")) a.resolution = j["resolution"].get<int>();
  return true;
}

int run_protocol(ProtocolArgs a) {
  if (!a.config.empty() && !apply_protocol_config(a)) return kExitUsage;
  if (a.kind.empty()) {
    std::cerr << "error: pass --kind or --config\n";
    return kExitUsage;
  }
  NodePtr tree;
  if (a.kind == "optimal") {
    if (!(a.x0 >= 0.0 && a.x0 <= 1.0) || a.n < 1) {
      std::cerr << "error: optimal protocol needs 0 <= x0 <= 1 and n >= 1\n";
      return kExitUsage;
    }
    const int cap = a.force ? a.n : kDefaultProtocolDepthCap;
    if (a.n > cap) {
      std::cerr << "error: n > " << kDefaultProtocolDepthCap
                << " materializes 2^n nodes; pass --force to insist\n";
      return kExitUsage;
    }
    tree = build_optimal(a.x0, a.n, a.resolution, cap);
  } else if (a.kind == "majority") {
    if (a.n < 1 || a.n % 2 == 0 || a.x0 != 0.5) {
      std::cerr << "error: majority protocol needs odd n and x0 = 0.5\n";
      return kExitUsage;
    }
    tree = build_majority(a.n);
  } else if (a.kind == "threshold") {
    if (a.n < 1 || !a.k_set || a.k < 0 || a.k > a.n + 1) {
      std::cerr << "error: threshold protocol needs n >= 1 and --k in [0, n+1]\n";
      return kExitUsage;
    }
    tree = build_threshold(a.n, a.k);
  } else {
    std::cerr << "error: unknown protocol kind: " << a.kind << "\n";
    return kExitUsage;
  }
  if (!a.out.empty()) {
    if (a.n > kDefaultProtocolDepthCap && !a.force) {
      std::cerr << "error: refusing to serialize a depth-" << a.n
                << " tree (2^n nodes); pass --force to insist\n";
      return kExitUsage;
    }
    write_output(a.out, tree_to_json(tree).dump());
  }
  auto& os = summary_stream(a.out);
  os << "root " << format6(tree->value) << "\n";
  os << "depth " << tree_depth(tree) << "\n";
  os << "insecurity " << format6(insecurity(tree)) << "\n";
  return 0;
}

struct AttackArgs {
  std::string mode;
  std::string tree_path;
  std::string direction = "up";
  std::string norm = "L1";
  int resolution = 10000;
  std::string out;
};

int run_attack(const AttackArgs& a) {
  const NodePtr tree = load_tree_or_fail(a.tree_path);

  if (a.mode == "failstop") {
    const auto violations = validate_two_party(tree);
    if (!violations.empty()) return report_violations(violations);
    const FailStopReport report = failstop_attack(tree, a.resolution);
    const auto best = best_party_attack(report);
    std::cout << "s_prime " << format6(report.s_prime) << "\n";
    std::cout << "deviation " << format6(best.second) << "\n";
    std::cout << "bound " << format6(report.bound) << "\n";
    std::cout << "best_party " << to_string(best.first) << "\n";
    if (!a.out.empty()) write_output(a.out, attack_report_to_json(report).dump());
    return 0;
  }

  const bool needs_uniform = (a.mode == "specialized");
  const auto violations = validate(tree, needs_uniform);
  if (!violations.empty()) return report_violations(violations);

  const bool uniform = has_uniform_depth(tree);
  const int n = tree_depth(tree);
  double deviation = 0.0;
  double bound = 0.0;
  bool have_bound = false;
  StoppingRule rule;

  if (a.mode == "maxscore") {
    const Norm norm = (a.norm == "L2") ? Norm::L2 : Norm::L1;
    ScoreReport r = max_score(tree, norm);
    deviation = r.score;
    rule = std::move(r.rule);
    if (uniform && n >= 1) {
      bound = (norm == Norm::L1) ? c_curve(n, a.resolution, SeedKind::C).eval(tree->value)
                                 : tree->value * (1.0 - tree->value) / n;
      have_bound = true;
    }
  } else if (a.mode == "restart") {
    RestartAttack r = restart_attack(tree, a.direction == "down" ? Direction::Down : Direction::Up);
    deviation = r.deviation;
    rule = std::move(r.strategy);
    if (uniform && n >= 1) {
      // guarantee for the better of the two directions
      bound = 0.5 * bound_curve(BoundKind::L, n, a.resolution).eval(tree->value);
      have_bound = true;
    }
  } else {  // specialized
    SpecializedScore r = specialized_max_score(tree);
    deviation = r.score;
    rule = std::move(r.rule);
    bound = c_curve(std::max(n, 1), a.resolution, SeedKind::Cprime).eval(tree->value);
    have_bound = true;
  }

  std::cout << "deviation " << format6(deviation) << "\n";
  if (have_bound) {
    std::cout << "bound " << format6(bound) << "\n";
  } else {
    std::cout << "bound n/a\n";
  }
  if (!a.out.empty()) {
    write_output(a.out, attack_report_to_json(a.mode, deviation, bound, rule).dump());
  }
  return 0;
}

struct VerifyArgs {
  std::string tree_path;
  std::vector<std::string> suites;
  int resolution = 10000;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  static const std::vector<std::string> known = {"martingale", "score-constancy",
                                                 "conservation", "bounds"};
  for (const auto& s : a.suites) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      std::cerr << "error: unknown suite: " << s << "\n";
      return kExitUsage;
    }
  }
  const NodePtr tree = load_tree_or_fail(a.tree_path);
  json results;
  bool all_pass = true;
  constexpr double kBand = 1e-3;  // max(1e-6, grid error)

  for (const auto& s : a.suites) {
    json r;
    bool pass = false;
    try {
      if (s == "martingale") {
        const auto violations = validate(tree);
        pass = violations.empty();
        json list = json::array();
        for (const auto& v : violations) list.push_back(to_string(v));
        r["violations"] = std::move(list);
      } else if (s == "score-constancy") {
        const double hi = max_score(tree, Norm::L1).score;
        const double lo = min_score(tree, Norm::L1).score;
        double spread = hi - lo;
        for (const auto& rule : sample_maximal_rules(tree, 100, 42)) {
          const double sc = score_of_rule(tree, rule, Norm::L1);
          spread = std::max({spread, hi - sc, sc - lo});
        }
        r["max_score"] = hi;
        r["min_score"] = lo;
        r["spread"] = spread;
        pass = spread <= kBand;
      } else if (s == "conservation") {
        const double ssi = sum_squared_increments(tree);
        const double expect = tree->value * (1.0 - tree->value);
        r["sum_squared_increments"] = ssi;
        r["root_variance"] = expect;
        pass = std::fabs(ssi - expect) <= 1e-9;
      } else {  // bounds
        if (!has_uniform_depth(tree)) {
          throw std::invalid_argument("bounds suite needs a uniform-depth tree");
        }
        const int n = tree_depth(tree);
        const double root = tree->value;
        const double l1 = max_score(tree, Norm::L1).score;
        const double l2 = max_score(tree, Norm::L2).score;
        const DirectionalReport dir = directional_susceptibility(tree);
        const double cn = c_curve(n, a.resolution, SeedKind::C).eval(root);
        const double cpn = c_curve(n, a.resolution, SeedKind::Cprime).eval(root);
        const double spec = specialized_max_score(tree).score;
        r["max_score_l1"] = l1;
        r["c_n"] = cn;
        r["max_score_l2"] = l2;
        r["specialized"] = spec;
        r["c_prime_n"] = cpn;
        pass = l1 >= cn - kBand && l2 >= root * (1.0 - root) / n - 1e-9 &&
               dir.up + dir.down >= l1 - 1e-12 && spec >= cpn - kBand;
      }
    } catch (const std::exception& e) {
      r["error"] = e.what();
      pass = false;
    }
    r["pass"] = pass;
    results[s] = std::move(r);
    all_pass = all_pass && pass;
    std::cout << s << ": " << (pass ? "pass" : "fail") << "\n";
  }

  if (!a.out.empty()) {
    write_output(a.out, json{{"pass", all_pass}, {"suites", results}}.dump());
  }
  return all_pass ? 0 : kExitValidation;
}

struct SimulateArgs {
  std::string tree_path;
  std::string mode;
  std::string strategy_path;
  std::int64_t trials = 1000000;
  std::uint64_t seed = 42;
  int resolution = 10000;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const NodePtr tree = load_tree_or_fail(a.tree_path);
  const auto violations =
      a.mode == "failstop" ? validate_two_party(tree) : validate(tree);
  if (!violations.empty()) return report_violations(violations);

  SimMode mode = SimMode::RestartUp;
  if (a.mode == "restart_down") mode = SimMode::RestartDown;
  if (a.mode == "failstop") mode = SimMode::FailStop;

  StoppingRule strategy;
  if (!a.strategy_path.empty()) {
    strategy = rule_from_json(read_json_file(a.strategy_path));
  } else if (mode == SimMode::RestartUp) {
    strategy = restart_attack(tree, Direction::Up).strategy;
  } else if (mode == SimMode::RestartDown) {
    strategy = restart_attack(tree, Direction::Down).strategy;
  } else {
    strategy = failstop_attack(tree, a.resolution).rule;
  }

  const SimResult res = simulate_attack(tree, strategy, mode, a.trials, a.seed);
  const double predicted = expected_outcome_under(tree, strategy, mode);
  std::cout << "empirical_bias " << format6(res.empirical_bias) << "\n";
  std::cout << "stderr " << format6(res.stderr_bias) << "\n";
  std::cout << "predicted " << format6(predicted) << "\n";
  if (!a.out.empty()) {
    write_output(a.out, json{{"mode", a.mode},
                             {"trials", res.trials},
                             {"seed", a.seed},
                             {"empirical_bias", res.empirical_bias},
                             {"stderr", res.stderr_bias},
                             {"predicted", predicted}}
                            .dump());
  }
  return 0;
}

struct ReportArgs {
  double eps = 0.01;
  double x0 = 0.5;
  int n = 1;
  double x = -1.0;  // negative means the whole 101-point grid
  int resolution = 10000;
  std::string out;
};

int run_report_processors(const ReportArgs& a) {
  if (!(a.eps > 0.0 && a.eps < 1.0)) {
    std::cerr << "error: --eps must be in (0,1)\n";
    return kExitUsage;
  }
  const auto optimal = processors_needed(a.x0, a.eps, InsecurityModel::OptimalUpper);
  const auto majority = processors_needed(0.5, a.eps, InsecurityModel::MajorityAsymptotic);
  std::ostringstream table;
  table << "eps,optimal_n,majority_n\n";
  table << format6(a.eps) << "," << optimal << "," << majority << "\n";
  if (!a.out.empty()) write_output(a.out, table.str());
  if (a.out != "-") std::cout << table.str();
  return 0;
}

int run_report_sandwich(const ReportArgs& a) {
  char buf[160];
  std::string csv = "n,x,L,C,U\n";
  const Curve cn = c_curve(a.n, a.resolution, SeedKind::C);
  const Curve ln = bound_curve(BoundKind::L, a.n, a.resolution);
  const Curve un = bound_curve(BoundKind::U, a.n, a.resolution);
  std::vector<double> xs;
  if (a.x >= 0.0) {
    xs.push_back(a.x);
  } else {
    for (int i = 0; i <= 100; ++i) xs.push_back(i / 100.0);
  }
  for (double x : xs) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g\n", a.n, x, ln.eval(x),
                  cn.eval(x), un.eval(x));
    csv += buf;
  }
  if (!a.out.empty()) {
    write_output(a.out, csv);
    summary_stream(a.out) << "sandwich rows: " << xs.size() << "\n";
  } else {
    std::cout << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal coin-tossing martingales: gap curves, protocol trees, attacks"};
  app.require_subcommand(1);

  CurveArgs curve_args;
  auto* curve_cmd = app.add_subcommand("curve", "sample a gap or bound curve, emit CSV");
  curve_cmd->add_option("--kind", curve_args.kind, "curve family")
      ->required()
      ->check(CLI::IsMember({"C", "Cprime", "L", "U", "G", "D", "Lprime"}));
  curve_cmd->add_option("--n", curve_args.n, "depth index")->required()->check(CLI::PositiveNumber);
  curve_cmd->add_option("--resolution", curve_args.resolution, "grid intervals")
      ->capture_default_str()
      ->check(CLI::Range(100, 100000000));
  curve_cmd->add_option("--format", curve_args.format, "output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  curve_cmd->add_option("--out", curve_args.out, "output path, - for stdout");

  ProtocolArgs protocol_args;
  auto* protocol_cmd = app.add_subcommand("protocol", "build a protocol tree, emit JSON");
  protocol_cmd->add_option("--kind", protocol_args.kind, "protocol kind")
      ->check(CLI::IsMember({"optimal", "majority", "threshold"}));
  protocol_cmd->add_option("--config", protocol_args.config,
                           "JSON spec {kind, x0, n, k, resolution}; overrides the flags");
  protocol_cmd->add_option("--x0", protocol_args.x0, "target bias")->capture_default_str();
  protocol_cmd->add_option("--n", protocol_args.n, "rounds")->check(CLI::PositiveNumber);
  auto* k_opt = protocol_cmd->add_option("--k", protocol_args.k, "threshold (threshold kind)");
  protocol_cmd->add_option("--resolution", protocol_args.resolution, "curve grid intervals")
      ->capture_default_str()
      ->check(CLI::Range(100, 100000000));
  protocol_cmd->add_flag("--force", protocol_args.force, "allow depths beyond the 2^n cap");
  protocol_cmd->add_option("--out", protocol_args.out, "tree JSON output path, - for stdout");

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack", "run an attack against a tree file");
  attack_cmd->add_option("mode", attack_args.mode, "attack mode")
      ->required()
      ->check(CLI::IsMember({"maxscore", "restart", "specialized", "failstop"}));
  attack_cmd->add_option("tree", attack_args.tree_path, "tree JSON path, - for stdin")->required();
  attack_cmd->add_option("--direction", attack_args.direction, "restart direction")
      ->capture_default_str()
      ->check(CLI::IsMember({"up", "down"}));
  attack_cmd->add_option("--norm", attack_args.norm, "score norm for maxscore")
      ->capture_default_str()
      ->check(CLI::IsMember({"L1", "L2"}));
  attack_cmd->add_option("--resolution", attack_args.resolution, "curve grid intervals")
      ->capture_default_str()
      ->check(CLI::Range(100, 100000000));
  attack_cmd->add_option("--out", attack_args.out, "report JSON output path, - for stdout");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites against a tree file");
  verify_cmd->add_option("tree", verify_args.tree_path, "tree JSON path, - for stdin")->required();
  verify_cmd
      ->add_option("--suites", verify_args.suites,
                   "comma-separated: martingale,score-constancy,conservation,bounds")
      ->required()
      ->delimiter(',');
  verify_cmd->add_option("--resolution", verify_args.resolution, "curve grid intervals")
      ->capture_default_str()
      ->check(CLI::Range(100, 100000000));
  verify_cmd->add_option("--out", verify_args.out, "result JSON output path, - for stdout");

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo replay of an attack");
  simulate_cmd->add_option("tree", simulate_args.tree_path, "tree JSON path, - for stdin")
      ->required();
  simulate_cmd->add_option("--mode", simulate_args.mode, "attack mode")
      ->required()
      ->check(CLI::IsMember({"restart_up", "restart_down", "failstop"}));
  simulate_cmd->add_option("--strategy", simulate_args.strategy_path,
                           "rule JSON path (default: the computed optimal strategy)");
  simulate_cmd->add_option("--trials", simulate_args.trials, "Monte Carlo trials")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", simulate_args.seed, "RNG seed")->capture_default_str();
  simulate_cmd->add_option("--resolution", simulate_args.resolution, "curve grid intervals")
      ->capture_default_str()
      ->check(CLI::Range(100, 100000000));
  simulate_cmd->add_option("--out", simulate_args.out, "result JSON output path, - for stdout");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "tables: processor counts, curve sandwich");
  report_cmd->require_subcommand(1);
  auto* processors_cmd =
      report_cmd->add_subcommand("processors", "processors needed for a target insecurity");
  processors_cmd->add_option("--eps", report_args.eps, "target insecurity")
      ->required();
  processors_cmd->add_option("--x0", report_args.x0, "target bias (optimal model)")
      ->capture_default_str();
  processors_cmd->add_option("--out", report_args.out, "CSV output path, - for stdout");
  auto* sandwich_cmd = report_cmd->add_subcommand("sandwich", "L_n, C_n, U_n values");
  sandwich_cmd->add_option("--n", report_args.n, "depth index")
      ->required()
      ->check(CLI::PositiveNumber);
  sandwich_cmd->add_option("--x", report_args.x, "evaluate at a single x (default: 101-point grid)")
      ->check(CLI::Range(0.0, 1.0));
  sandwich_cmd->add_option("--resolution", report_args.resolution, "grid intervals")
      ->capture_default_str()
      ->check(CLI::Range(100, 100000000));
  sandwich_cmd->add_option("--out", report_args.out, "CSV output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  protocol_args.k_set = k_opt->count() > 0;

  try {
    if (app.got_subcommand(curve_cmd)) return run_curve(curve_args);
    if (app.got_subcommand(protocol_cmd)) return run_protocol(protocol_args);
    if (app.got_subcommand(attack_cmd)) return run_attack(attack_args);
    if (app.got_subcommand(verify_cmd)) return run_verify(verify_args);
    if (app.got_subcommand(simulate_cmd)) return run_simulate(simulate_args);
    if (app.got_subcommand(report_cmd)) {
      if (report_cmd->got_subcommand(processors_cmd)) return run_report_processors(report_args);
      return run_report_sandwich(report_args);
    }
  } catch (const CLI::ValidationError&) {
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
