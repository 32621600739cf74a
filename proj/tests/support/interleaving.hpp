// Reference checker: compiles a kernel to a flat stack program (calls
// inlined). Races and divergence come from every interleaving of each thread
// pair with blocking barriers; assertions and faults come from every
// interleaving of the whole launch. Shares no code with the oracle beyond the
// AST.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "barrierfix/instrumenter.hpp"

namespace barrierfix::testing {

enum class VerdictClass { Safe, Race, Divergence, Other };

std::string className(VerdictClass c);

struct ReferenceConfig {
  std::optional<LaunchConfig> launch;
  std::optional<int> unroll;
  std::size_t stateLimit = 2'000'000;
};

VerdictClass referenceVerdict(const InstrumentedKernel& ik, const std::vector<bool>& assignment,
                              const ReferenceConfig& cfg = {});

}  // namespace barrierfix::testing
