// Barrier instrumentation: guarded barriers at shared-access sites and scope
// boundaries, plus guards on the programmer's own barriers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "barrierfix/minikernel.hpp"

namespace barrierfix {

using VarId = int;  // b_i, 1-based

struct WeightConfig {
  std::int64_t gridWeight = 12;  // gw
  std::int64_t loopWeight = 10;  // lw
  bool gridEnabled = true;
  bool inspectExisting = true;
};

inline constexpr int kMaxWeightedLoopDepth = 6;

// gw*gb + lw^ld, with ld capped at kMaxWeightedLoopDepth.
std::int64_t barrierWeight(BarrierLevel level, int loopDepth, const WeightConfig& cfg);

struct BarrierVariable {
  VarId id = 0;
  SourceLoc loc;
  BarrierLevel level = BarrierLevel::Block;
  BarrierOrigin origin = BarrierOrigin::Instrumented;
  int loopDepth = 0;
  std::int64_t weight = 1;
};

struct InstrumentedKernel {
  Kernel kernel;
  std::vector<BarrierVariable> vars;  // vars[i].id == i + 1
  Kernel sourceKernel;

  std::size_t varCount() const { return vars.size(); }
  const BarrierVariable& var(VarId id) const { return vars.at(static_cast<std::size_t>(id - 1)); }
  std::vector<std::int64_t> weights() const;
};

class InstrumentationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Throws InstrumentationError when the kernel already carries guards or
// inserted barriers, or when the weight configuration is invalid.
InstrumentedKernel instrument(const Kernel& kernel, const WeightConfig& cfg = {});

class MissingAssignment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// assignment[i] is the value of b_{i+1}. Enabled guards become plain
// barriers, disabled ones are deleted.
Kernel applySolution(const InstrumentedKernel& ik, const std::vector<bool>& assignment);

}  // namespace barrierfix
