#pragma once

#include <string>

#include "json.hpp"
#include "martgap/attacks.hpp"
#include "martgap/stopping.hpp"
#include "martgap/tree.hpp"

namespace martgap {

/// Tree schema, bit-exact field names:
///   {"value": <number>,
///    "children": [{"p": <number>, "node": <tree>}, ...],
///    "defense": <number, optional>,
///    "turn": "A" | "B" (optional)}
/// Numbers round-trip at full precision (shortest round-trip decimals).
nlohmann::json tree_to_json(const NodePtr& root);
NodePtr tree_from_json(const nlohmann::json& j);

/// {"stops": [[<child indices path>], ...]}
nlohmann::json rule_to_json(const StoppingRule& rule);
StoppingRule rule_from_json(const nlohmann::json& j);

/// {"mode": ..., "deviation": ..., "s_prime": ..., "split": {...},
///  "bound": ..., "stops": [...]}; s_prime and split appear for fail-stop
/// reports only.
nlohmann::json attack_report_to_json(const std::string& mode, double deviation, double bound,
                                     const StoppingRule& rule);
nlohmann::json attack_report_to_json(const FailStopReport& report);

}  // namespace martgap
