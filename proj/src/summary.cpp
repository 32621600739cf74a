#include "barrierfix/summary.hpp"

#include <set>

namespace barrierfix {

#ifndef BARRIERFIX_VERSION
#define BARRIERFIX_VERSION "0.0.0"
#endif

std::string_view toolVersion() { return BARRIERFIX_VERSION; }

std::string_view outcomeName(const RepairResult& result) {
  if (result.alreadySafe()) return "already_safe";
  if (result.repaired()) return "repaired";
  if (std::holds_alternative<outcome::Timeout>(result.outcome)) return "timeout";
  return "cannot_repair";
}

std::string_view strategyName(Strategy s) { return s == Strategy::Mhs ? "mhs" : "maxsat"; }

nlohmann::ordered_json summaryJson(const std::string& inputPath, const RepairResult& result,
                                   Strategy strategy) {
  nlohmann::ordered_json j;
  j["toolVersion"] = toolVersion();
  j["inputPath"] = inputPath;
  j["outcome"] = outcomeName(result);
  if (const auto* c = std::get_if<outcome::CannotRepair>(&result.outcome)) {
    j["reason"] = reasonName(c->reason);
    j["detail"] = c->detail;
  }
  j["changes"] = nlohmann::ordered_json::array();
  std::int64_t totalWeight = 0;
  if (const auto* r = std::get_if<outcome::Repaired>(&result.outcome)) {
    totalWeight = r->solution.totalWeight;
    for (const Change& ch : r->changes) {
      nlohmann::ordered_json c;
      c["action"] = ch.action == ChangeAction::AddBarrier ? "add_barrier" : "remove_barrier";
      c["level"] = ch.level == BarrierLevel::Grid ? "grid" : "block";
      c["file"] = ch.loc.file.empty() ? inputPath : ch.loc.file;
      c["line"] = ch.loc.line;
      c["col"] = ch.loc.col;
      j["changes"].push_back(std::move(c));
    }
  }
  nlohmann::ordered_json stats;
  stats["iterations"] = result.stats.iterations;
  stats["verifierCalls"] = result.stats.verifierCalls;
  stats["solverCalls"] = result.stats.solverCalls;
  stats["totalWeight"] = totalWeight;
  stats["strategy"] = strategyName(strategy);
  j["stats"] = std::move(stats);
  return j;
}

std::string summaryText(const std::string& inputPath, const RepairResult& result,
                        Strategy strategy) {
  return summaryJson(inputPath, result, strategy).dump(2) + "\n";
}

namespace {

void requireKeys(const nlohmann::json& obj, const std::string& where,
                 const std::set<std::string>& required, const std::set<std::string>& optional,
                 std::vector<std::string>& errors) {
  for (const auto& key : required) {
    if (!obj.contains(key)) errors.push_back(where + ": missing key '" + key + "'");
  }
  for (const auto& [key, value] : obj.items()) {
    if (!required.count(key) && !optional.count(key)) {
      errors.push_back(where + ": unexpected key '" + key + "'");
    }
  }
}

bool isCount(const nlohmann::json& v) { return v.is_number_integer() && v.get<std::int64_t>() >= 0; }

}  // namespace

std::vector<std::string> validateSummary(const nlohmann::json& s) {
  std::vector<std::string> errors;
  if (!s.is_object()) return {"summary: not an object"};
  requireKeys(s, "summary", {"toolVersion", "inputPath", "outcome", "changes", "stats"},
              {"reason", "detail"}, errors);
  if (!errors.empty()) return errors;

  if (!s["toolVersion"].is_string()) errors.push_back("toolVersion: not a string");
  if (!s["inputPath"].is_string()) errors.push_back("inputPath: not a string");
  static const std::set<std::string> outcomes{"repaired", "already_safe", "cannot_repair",
                                              "timeout"};
  std::string outcomeValue = s["outcome"].is_string() ? s["outcome"].get<std::string>() : "";
  if (!outcomes.count(outcomeValue)) errors.push_back("outcome: unknown value");

  bool cannotRepair = outcomeValue == "cannot_repair";
  if (cannotRepair != s.contains("reason") || cannotRepair != s.contains("detail")) {
    errors.push_back("reason/detail: present exactly when outcome is cannot_repair");
  }
  if (s.contains("reason")) {
    static const std::set<std::string> reasons{"unsat_constraints", "non_repairable_error",
                                               "empty_witness"};
    if (!s["reason"].is_string() || !reasons.count(s["reason"].get<std::string>())) {
      errors.push_back("reason: unknown value");
    }
  }
  if (s.contains("detail") && !s["detail"].is_string()) errors.push_back("detail: not a string");

  const auto& changes = s["changes"];
  if (!changes.is_array()) {
    errors.push_back("changes: not an array");
  } else {
    if (outcomeValue != "repaired" && !changes.empty()) {
      errors.push_back("changes: must be empty unless outcome is repaired");
    }
    if (outcomeValue == "repaired" && changes.empty()) {
      errors.push_back("changes: a repaired outcome lists at least one change");
    }
    for (std::size_t i = 0; i < changes.size(); ++i) {
      const auto& c = changes[i];
      std::string where = "changes[" + std::to_string(i) + "]";
      if (!c.is_object()) {
        errors.push_back(where + ": not an object");
        continue;
      }
      std::size_t before = errors.size();
      requireKeys(c, where, {"action", "level", "file", "line", "col"}, {}, errors);
      if (errors.size() != before) continue;
      if (c["action"] != "add_barrier" && c["action"] != "remove_barrier") {
        errors.push_back(where + ".action: unknown value");
      }
      if (c["level"] != "block" && c["level"] != "grid") errors.push_back(where + ".level: unknown value");
      if (!c["file"].is_string()) errors.push_back(where + ".file: not a string");
      if (!c["line"].is_number_integer() || c["line"].get<std::int64_t>() < 1) {
        errors.push_back(where + ".line: not a positive integer");
      }
      if (!c["col"].is_number_integer() || c["col"].get<std::int64_t>() < 1) {
        errors.push_back(where + ".col: not a positive integer");
      }
    }
  }

  const auto& stats = s["stats"];
  if (!stats.is_object()) {
    errors.push_back("stats: not an object");
    return errors;
  }
  std::size_t before = errors.size();
  requireKeys(stats, "stats",
              {"iterations", "verifierCalls", "solverCalls", "totalWeight", "strategy"}, {}, errors);
  if (errors.size() != before) return errors;
  for (const char* key : {"iterations", "verifierCalls", "solverCalls", "totalWeight"}) {
    if (!isCount(stats[key])) errors.push_back(std::string("stats.") + key + ": not a count");
  }
  if (stats["strategy"] != "mhs" && stats["strategy"] != "maxsat") {
    errors.push_back("stats.strategy: unknown value");
  }
  return errors;
}

}  // namespace barrierfix
