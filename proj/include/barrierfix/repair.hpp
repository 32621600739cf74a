// The repair loop: solve the accumulated constraint, verify the kernel under
// the solution, and block each reported error trace with a new clause.
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "barrierfix/clause_generation.hpp"
#include "barrierfix/constraints.hpp"
#include "barrierfix/instrumenter.hpp"
#include "barrierfix/oracle.hpp"

namespace barrierfix {

struct RepairConfig {
  Strategy strategy = Strategy::Mhs;
  WeightConfig weights;
  int maxIterations = 1000;
  std::optional<LaunchConfig> launch;  // defaults to the kernel's own
  std::optional<int> unroll;
  std::int64_t stepBudget = 100'000;
  std::optional<std::chrono::milliseconds> timeLimit;
};

enum class ChangeAction { AddBarrier, RemoveBarrier };

struct Change {
  ChangeAction action = ChangeAction::AddBarrier;
  BarrierLevel level = BarrierLevel::Block;
  SourceLoc loc;
  VarId var = 0;
};

enum class CannotRepairReason { UnsatConstraints, NonRepairableError, EmptyWitness };

std::string_view reasonName(CannotRepairReason r);

namespace outcome {

struct Repaired {
  Solution solution;
  Kernel kernel;
  std::vector<Change> changes;
  int iterations = 0;
  int verifierCalls = 0;
};
struct CannotRepair {
  CannotRepairReason reason = CannotRepairReason::UnsatConstraints;
  std::string detail;
};
struct Timeout {
  int iterations = 0;
};

}  // namespace outcome

using RepairOutcome = std::variant<outcome::Repaired, outcome::CannotRepair, outcome::Timeout>;

struct IterationRecord {
  std::vector<bool> assignment;
  std::optional<Verdict> verdict;  // absent when the solver reported Unsat
  std::optional<Clause> clause;
};

struct RepairStats {
  int iterations = 0;
  int verifierCalls = 0;
  int solverCalls = 0;
  int fallbacks = 0;
  bool minimalityPassAdopted = false;
};

struct RepairResult {
  RepairOutcome outcome;
  std::optional<InstrumentedKernel> instrumented;
  Constraint phi;
  std::vector<IterationRecord> iterations;
  RepairStats stats;

  bool repaired() const { return std::holds_alternative<outcome::Repaired>(outcome); }
  // Repaired without touching the kernel.
  bool alreadySafe() const;
};

// True iff next has not been generated before.
bool progressCheck(const std::vector<Clause>& history, const Clause& next);

std::vector<Change> changesFor(const InstrumentedKernel& ik, const std::vector<bool>& assignment);

// Never throws; every failure is reported through the outcome.
RepairResult repair(const Kernel& kernel, const RepairConfig& cfg = {});
RepairResult repair(const InstrumentedKernel& ik, const RepairConfig& cfg = {});

}  // namespace barrierfix
