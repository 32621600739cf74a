#include "doctest.h"

#include "barrierfix/repair.hpp"
#include "support/brute_force.hpp"
#include "support/checks.hpp"
#include "support/corpus.hpp"

using namespace barrierfix;
using barrierfix::testing::isSafe;
using barrierfix::testing::loadCorpus;
using barrierfix::testing::verifyAsWritten;

namespace {

const outcome::Repaired& repaired(const RepairResult& r) {
  REQUIRE(r.repaired());
  return std::get<outcome::Repaired>(r.outcome);
}

CannotRepairReason reasonOf(const RepairResult& r) {
  REQUIRE(std::holds_alternative<outcome::CannotRepair>(r.outcome));
  return std::get<outcome::CannotRepair>(r.outcome).reason;
}

}  // namespace

TEST_CASE("progressCheck") {
  CHECK(progressCheck({}, Clause::positive({1})));
  CHECK_FALSE(progressCheck({Clause::positive({1, 2})}, Clause::positive({1, 2})));
  CHECK(progressCheck({Clause::positive({1})}, Clause::negative({1})));
}

TEST_CASE("race repair adds one block barrier before the write") {
  RepairResult r = repair(loadCorpus("race"));
  const auto& rep = repaired(r);
  REQUIRE(rep.changes.size() == 1);
  CHECK(rep.changes[0].action == ChangeAction::AddBarrier);
  CHECK(rep.changes[0].level == BarrierLevel::Block);
  CHECK(rep.changes[0].loc.line == 4);
  CHECK(rep.solution.totalWeight == 1);
  CHECK(rep.iterations == 2);
  CHECK(rep.verifierCalls == 2);
  CHECK(isSafe(verifyAsWritten(rep.kernel)));
  CHECK(r.phi.size() == 1);
  CHECK(r.phi.clauses()[0] == Clause::positive({3, 4}));
}

TEST_CASE("divergence repair removes the programmer barrier") {
  RepairResult r = repair(loadCorpus("divergence"));
  const auto& rep = repaired(r);
  REQUIRE(rep.changes.size() == 1);
  CHECK(rep.changes[0].action == ChangeAction::RemoveBarrier);
  CHECK(rep.changes[0].loc.line == 5);
  CHECK(isSafe(verifyAsWritten(rep.kernel)));
  CHECK_FALSE(isSafe(verifyAsWritten(loadCorpus("divergence"))));
}

TEST_CASE("unrepairable kernel ends with contradicting clauses") {
  RepairResult r = repair(loadCorpus("unrepairable"));
  CHECK(reasonOf(r) == CannotRepairReason::UnsatConstraints);
  bool shared = false;
  for (const Clause& p : r.phi.positiveClauses()) {
    for (const Clause& n : r.phi.negativeClauses()) {
      for (const Literal& a : p.literals()) {
        for (const Literal& b : n.literals()) shared = shared || a.var == b.var;
      }
    }
  }
  CHECK(shared);
  // No assignment is both safe and consistent with the constraint.
  const InstrumentedKernel& ik = *r.instrumented;
  auto best = barrierfix::testing::bruteForceMinimum(ik.weights(), [&](const std::vector<bool>& a) {
    return isSafe(verify(ik, a));
  });
  CHECK_FALSE(best.has_value());
}

TEST_CASE("write-write race has no repair") {
  RepairResult r = repair(loadCorpus("write_write_race"));
  CHECK(reasonOf(r) == CannotRepairReason::EmptyWitness);
}

TEST_CASE("inter-block race needs grid instrumentation") {
  RepairResult grid = repair(loadCorpus("interblock"));
  const auto& rep = repaired(grid);
  REQUIRE(rep.changes.size() == 1);
  CHECK(rep.changes[0].level == BarrierLevel::Grid);
  CHECK(rep.solution.totalWeight == 13);

  RepairConfig noGrid;
  noGrid.weights.gridEnabled = false;
  RepairResult blocked = repair(loadCorpus("interblock"), noGrid);
  CHECK(std::holds_alternative<outcome::CannotRepair>(blocked.outcome));

  RepairResult intra = repair(loadCorpus("intrablock"));
  CHECK(repaired(intra).solution.totalWeight == 1);
}

TEST_CASE("kernel_example places the barrier before the branch") {
  RepairResult r = repair(loadCorpus("kernel_example"));
  const auto& rep = repaired(r);
  REQUIRE(rep.changes.size() == 1);
  CHECK(rep.changes[0].loc.line == 3);
}

TEST_CASE("inter-function race is repaired between the calls") {
  RepairResult r = repair(loadCorpus("interfunction_race"));
  const auto& rep = repaired(r);
  REQUIRE(rep.changes.size() == 1);
  CHECK(rep.changes[0].loc.line == 12);
  CHECK(rep.changes[0].level == BarrierLevel::Block);
}

TEST_CASE("already safe kernels need no changes") {
  RepairResult r = repair(loadCorpus("necessary_barrier"));
  CHECK(r.alreadySafe());
  RepairConfig fixed;
  fixed.weights.inspectExisting = false;
  RepairResult again = repair(loadCorpus("necessary_barrier"), fixed);
  CHECK(again.alreadySafe());
  CHECK(again.stats.iterations == 1);
}

TEST_CASE("assertion failures are not repairable") {
  RepairResult r = repair(loadCorpus("assertion_failure"));
  CHECK(reasonOf(r) == CannotRepairReason::NonRepairableError);
}

TEST_CASE("iteration limit and resource limit") {
  RepairConfig cfg;
  cfg.maxIterations = 1;
  RepairResult r = repair(loadCorpus("race"), cfg);
  REQUIRE(std::holds_alternative<outcome::Timeout>(r.outcome));
  CHECK(std::get<outcome::Timeout>(r.outcome).iterations == 1);

  RepairConfig tight;
  tight.stepBudget = 3;
  CHECK(reasonOf(repair(loadCorpus("loop_race"), tight)) == CannotRepairReason::NonRepairableError);

  RepairConfig zero;
  zero.maxIterations = 0;
  CHECK(reasonOf(repair(loadCorpus("race"), zero)) == CannotRepairReason::NonRepairableError);

  RepairConfig badWeights;
  badWeights.weights.loopWeight = 0;
  CHECK(reasonOf(repair(loadCorpus("race"), badWeights)) == CannotRepairReason::NonRepairableError);
}

TEST_CASE("changes follow variable origins") {
  InstrumentedKernel ik = instrument(loadCorpus("divergence"));
  std::vector<bool> a(ik.varCount(), false);
  a[0] = true;
  auto changes = changesFor(ik, a);
  REQUIRE(changes.size() == 2);
  CHECK(changes[0].action == ChangeAction::AddBarrier);
  CHECK(changes[0].var == 1);
  CHECK(changes[1].action == ChangeAction::RemoveBarrier);
  CHECK(changes[1].var == 5);
}

TEST_CASE("corpus: loop properties, strategy agreement and optimal weight") {
  for (const std::string& name : barrierfix::testing::corpusNames()) {
    CAPTURE(name);
    Kernel k = loadCorpus(name);
    RepairConfig mhs;
    RepairConfig maxsat;
    maxsat.strategy = Strategy::MaxSat;
    RepairResult a = repair(k, mhs);
    RepairResult b = repair(k, maxsat);
    std::string why;
    CHECK_MESSAGE(barrierfix::testing::loopClausesWellFormed(a, &why), why);
    CHECK_MESSAGE(barrierfix::testing::loopClausesWellFormed(b, &why), why);
    CHECK(a.outcome.index() == b.outcome.index());
    if (!a.repaired() || !b.repaired()) continue;
    const auto& ra = std::get<outcome::Repaired>(a.outcome);
    const auto& rb = std::get<outcome::Repaired>(b.outcome);
    CHECK(ra.solution.totalWeight == rb.solution.totalWeight);
    CHECK(isSafe(verify(*a.instrumented, ra.solution.assignment)));
    CHECK(isSafe(verifyAsWritten(ra.kernel)));
    CHECK(a.phi.satisfiedBy(ra.solution.assignment));

    const InstrumentedKernel& ik = *a.instrumented;
    REQUIRE(ik.varCount() <= 16);
    auto best = barrierfix::testing::bruteForceMinimum(ik.weights(), [&](const std::vector<bool>& x) {
      return a.phi.satisfiedBy(x) && isSafe(verify(ik, x));
    });
    REQUIRE(best.has_value());
    CHECK(ra.solution.totalWeight == *best);
    auto bestOverall = barrierfix::testing::bruteForceMinimum(
        ik.weights(), [&](const std::vector<bool>& x) { return isSafe(verify(ik, x)); });
    CHECK(bestOverall == best);
  }
}
