#include "barrierfix/repair.hpp"

#include <algorithm>
#include <sstream>

namespace barrierfix {

std::string_view reasonName(CannotRepairReason r) {
  switch (r) {
    case CannotRepairReason::UnsatConstraints: return "unsat_constraints";
    case CannotRepairReason::NonRepairableError: return "non_repairable_error";
    case CannotRepairReason::EmptyWitness: return "empty_witness";
  }
  return "unknown";
}

bool RepairResult::alreadySafe() const {
  const auto* r = std::get_if<outcome::Repaired>(&outcome);
  return r && r->changes.empty();
}

bool progressCheck(const std::vector<Clause>& history, const Clause& next) {
  return std::find(history.begin(), history.end(), next) == history.end();
}

std::vector<Change> changesFor(const InstrumentedKernel& ik, const std::vector<bool>& assignment) {
  std::vector<Change> out;
  for (const BarrierVariable& v : ik.vars) {
    bool on = assignment.at(static_cast<std::size_t>(v.id - 1));
    if (on && v.origin == BarrierOrigin::Instrumented) {
      out.push_back(Change{ChangeAction::AddBarrier, v.level, v.loc, v.id});
    } else if (!on && v.origin == BarrierOrigin::Programmer) {
      out.push_back(Change{ChangeAction::RemoveBarrier, v.level, v.loc, v.id});
    }
  }
  return out;
}

namespace {

outcome::CannotRepair cannot(CannotRepairReason reason, std::string detail) {
  return outcome::CannotRepair{reason, std::move(detail)};
}

class Loop {
 public:
  Loop(const InstrumentedKernel& ik, const RepairConfig& cfg, RepairResult& result)
      : ik_(ik), cfg_(cfg), result_(result), weights_(ik.weights()) {
    oracle_.launch = cfg.launch;
    oracle_.unroll = cfg.unroll;
    oracle_.stepBudget = cfg.stepBudget;
  }

  RepairOutcome run() {
    auto start = std::chrono::steady_clock::now();
    std::vector<Clause> history;
    for (int iteration = 1;; ++iteration) {
      if (iteration > cfg_.maxIterations ||
          (cfg_.timeLimit && std::chrono::steady_clock::now() - start > *cfg_.timeLimit)) {
        return outcome::Timeout{iteration - 1};
      }
      result_.stats.iterations = iteration;
      IterationRecord& record = result_.iterations.emplace_back();

      SolveResult solved = solveCounted(cfg_.strategy);
      if (!isSat(solved)) {
        return cannot(CannotRepairReason::UnsatConstraints,
                      "no barrier assignment avoids every error trace seen so far");
      }
      Solution sol = std::get<Sat>(solved).solution;
      record.assignment = sol.assignment;

      Verdict v = verifyCounted(sol.assignment);
      record.verdict = v;
      if (std::holds_alternative<verdict::Safe>(v)) return finish(std::move(sol));
      if (const auto* other = std::get_if<verdict::Other>(&v)) {
        return cannot(CannotRepairReason::NonRepairableError, other->description);
      }

      Clause clause = generateClause(v);
      record.clause = clause;
      if (!progressCheck(history, clause)) {
        std::ostringstream os;
        os << "clause " << clause << " was generated twice; the verifier repeated an error trace";
        return cannot(CannotRepairReason::NonRepairableError, os.str());
      }
      history.push_back(clause);
      result_.phi.add(std::move(clause));
    }
  }

 private:
  SolveResult solveCounted(Strategy strategy) {
    SolveStats stats;
    SolveResult r = solve(result_.phi, weights_, strategy, &stats);
    result_.stats.solverCalls += stats.calls;
    result_.stats.fallbacks += stats.fallbacks;
    return r;
  }

  Verdict verifyCounted(const std::vector<bool>& assignment) {
    ++result_.stats.verifierCalls;
    return verify(ik_, assignment, oracle_);
  }

  RepairOutcome finish(Solution sol) {
    if (cfg_.strategy == Strategy::Mhs) {
      ++result_.stats.solverCalls;
      SolveResult exact = solveWPMS(result_.phi, weights_);
      if (const auto* s = std::get_if<Sat>(&exact);
          s && s->solution.totalWeight < sol.totalWeight &&
          std::holds_alternative<verdict::Safe>(verifyCounted(s->solution.assignment))) {
        sol = s->solution;
        result_.stats.minimalityPassAdopted = true;
      }
    }
    outcome::Repaired r;
    r.kernel = applySolution(ik_, sol.assignment);
    r.changes = changesFor(ik_, sol.assignment);
    r.solution = std::move(sol);
    r.iterations = result_.stats.iterations;
    r.verifierCalls = result_.stats.verifierCalls;
    return r;
  }

  const InstrumentedKernel& ik_;
  const RepairConfig& cfg_;
  RepairResult& result_;
  Weights weights_;
  OracleConfig oracle_;
};

}  // namespace

RepairResult repair(const InstrumentedKernel& ik, const RepairConfig& cfg) {
  RepairResult result;
  result.instrumented = ik;
  if (cfg.maxIterations < 1) {
    result.outcome = cannot(CannotRepairReason::NonRepairableError, "maxIterations must be at least 1");
    return result;
  }
  try {
    result.outcome = Loop(*result.instrumented, cfg, result).run();
  } catch (const EmptyWitness& e) {
    result.outcome = cannot(CannotRepairReason::EmptyWitness, e.what());
  } catch (const ResourceLimit& e) {
    result.outcome = cannot(CannotRepairReason::NonRepairableError, e.what());
  } catch (const std::exception& e) {
    result.outcome = cannot(CannotRepairReason::NonRepairableError, e.what());
  }
  return result;
}

RepairResult repair(const Kernel& kernel, const RepairConfig& cfg) {
  try {
    return repair(instrument(kernel, cfg.weights), cfg);
  } catch (const std::exception& e) {
    RepairResult result;
    result.outcome = cannot(CannotRepairReason::NonRepairableError, e.what());
    return result;
  }
}

}  // namespace barrierfix
