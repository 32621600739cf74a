// Machine-readable summary of a repair run.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "barrierfix/repair.hpp"

namespace barrierfix {

std::string_view toolVersion();

std::string_view outcomeName(const RepairResult& result);  // repaired, already_safe, ...
std::string_view strategyName(Strategy s);                 // mhs, maxsat

nlohmann::ordered_json summaryJson(const std::string& inputPath, const RepairResult& result,
                                   Strategy strategy);

// Pretty-printed with a trailing newline.
std::string summaryText(const std::string& inputPath, const RepairResult& result,
                        Strategy strategy);

// Checks a parsed summary against the documented schema; empty when valid.
std::vector<std::string> validateSummary(const nlohmann::json& summary);

}  // namespace barrierfix
