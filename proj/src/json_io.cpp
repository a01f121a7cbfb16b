#include "martgap/json_io.hpp"

#include <stdexcept>

namespace martgap {

namespace {

using nlohmann::json;

json node_to_json(const TreeNode& n) {
  json j;
  j["value"] = n.value;
  if (!n.is_leaf()) {
    json children = json::array();
    for (const Edge& e : n.edges) {
      children.push_back({{"p", e.p}, {"node", node_to_json(*e.node)}});
    }
    j["children"] = std::move(children);
  }
  if (n.defense.has_value()) j["defense"] = *n.defense;
  if (n.turn.has_value()) j["turn"] = (*n.turn == Turn::A) ? "A" : "B";
  return j;
}

NodePtr node_from_json(const json& j) {
  if (!j.is_object() || !j.contains("value") || !j["value"].is_number()) {
    throw std::invalid_argument("tree JSON: node needs a numeric \"value\"");
  }
  auto node = std::make_shared<TreeNode>();
  node->value = j["value"].get<double>();
  if (j.contains("children")) {
    const json& children = j["children"];
    if (!children.is_array()) {
      throw std::invalid_argument("tree JSON: \"children\" must be an array");
    }
    for (const json& c : children) {
      if (!c.is_object() || !c.contains("p") || !c["p"].is_number() || !c.contains("node")) {
        throw std::invalid_argument("tree JSON: child needs \"p\" and \"node\"");
      }
      node->edges.push_back({c["p"].get<double>(), node_from_json(c["node"])});
    }
  }
  if (j.contains("defense")) {
    if (!j["defense"].is_number()) {
      throw std::invalid_argument("tree JSON: \"defense\" must be a number");
    }
    node->defense = j["defense"].get<double>();
  }
  if (j.contains("turn")) {
    const std::string t = j["turn"].get<std::string>();
    if (t == "A") {
      node->turn = Turn::A;
    } else if (t == "B") {
      node->turn = Turn::B;
    } else {
      throw std::invalid_argument("tree JSON: \"turn\" must be \"A\" or \"B\"");
    }
  }
  return node;
}

}  // namespace

nlohmann::json tree_to_json(const NodePtr& root) {
  if (!root) throw std::invalid_argument("tree_to_json: empty tree");
  return node_to_json(*root);
}

NodePtr tree_from_json(const nlohmann::json& j) { return node_from_json(j); }

nlohmann::json rule_to_json(const StoppingRule& rule) {
  json stops = json::array();
  for (const auto& path : rule.stop_paths()) stops.push_back(path);
  return json{{"stops", std::move(stops)}};
}

StoppingRule rule_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("stops") || !j["stops"].is_array()) {
    throw std::invalid_argument("rule JSON: needs a \"stops\" array");
  }
  std::vector<std::vector<int>> paths;
  for (const json& p : j["stops"]) {
    if (!p.is_array()) throw std::invalid_argument("rule JSON: each stop must be a path array");
    paths.push_back(p.get<std::vector<int>>());
  }
  return StoppingRule::from_stop_paths(paths);
}

nlohmann::json attack_report_to_json(const std::string& mode, double deviation, double bound,
                                     const StoppingRule& rule) {
  json j;
  j["mode"] = mode;
  j["deviation"] = deviation;
  j["bound"] = bound;
  j["stops"] = rule_to_json(rule)["stops"];
  return j;
}

nlohmann::json attack_report_to_json(const FailStopReport& report) {
  const auto best = best_party_attack(report);
  json j = attack_report_to_json("failstop", best.second, report.bound, report.rule);
  j["s_prime"] = report.s_prime;
  j["split"] = {{"A+", report.split[0]},
                {"A-", report.split[1]},
                {"B+", report.split[2]},
                {"B-", report.split[3]}};
  return j;
}

}  // namespace martgap
