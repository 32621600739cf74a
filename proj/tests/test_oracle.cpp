#include "doctest.h"

#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

#include "barrierfix/oracle.hpp"
#include "support/corpus.hpp"
#include "support/interleaving.hpp"
#include "support/brute_force.hpp"
#include "support/random_kernel.hpp"

using namespace barrierfix;
using barrierfix::testing::loadCorpus;
using barrierfix::testing::VerdictClass;

namespace {

std::vector<bool> allFalse(const InstrumentedKernel& ik) { return std::vector<bool>(ik.varCount(), false); }

std::vector<bool> only(const InstrumentedKernel& ik, std::initializer_list<VarId> on) {
  std::vector<bool> a = allFalse(ik);
  for (VarId v : on) a[static_cast<std::size_t>(v - 1)] = true;
  return a;
}

VerdictClass classOf(const Verdict& v) {
  if (std::holds_alternative<verdict::Safe>(v)) return VerdictClass::Safe;
  if (std::holds_alternative<verdict::Race>(v)) return VerdictClass::Race;
  if (std::holds_alternative<verdict::Divergence>(v)) return VerdictClass::Divergence;
  return VerdictClass::Other;
}

// Invariants every verdict must satisfy relative to its assignment.
void checkPolarity(const Verdict& v, const std::vector<bool>& a) {
  if (const auto* r = std::get_if<verdict::Race>(&v)) {
    for (VarId x : r->disabledOnPath) CHECK_FALSE(a[static_cast<std::size_t>(x - 1)]);
    CHECK(r->access1.array == r->access2.array);
    CHECK(r->access1.indexValue == r->access2.indexValue);
    CHECK((r->access1.kind == AccessKind::Write || r->access2.kind == AccessKind::Write));
    CHECK_FALSE((r->access1.thread == r->access2.thread));
  } else if (const auto* d = std::get_if<verdict::Divergence>(&v)) {
    for (VarId x : d->enabledAtFault) CHECK(a[static_cast<std::size_t>(x - 1)]);
    if (!d->enabledAtFault.empty()) CHECK(d->enabledAtFault.count(d->at) == 1);
  }
}

}  // namespace

TEST_CASE("race kernel with every guard off races between read and write") {
  InstrumentedKernel ik = instrument(loadCorpus("race"));
  REQUIRE(ik.varCount() == 4);
  Verdict v = verify(ik, allFalse(ik));
  const auto* r = std::get_if<verdict::Race>(&v);
  REQUIRE(r);
  CHECK(r->access1.thread == ThreadCoord{0, 0});
  CHECK(r->access1.kind == AccessKind::Read);
  CHECK(r->access1.indexValue == 1);
  CHECK(r->access2.thread == ThreadCoord{0, 1});
  CHECK(r->access2.kind == AccessKind::Write);
  CHECK(r->disabledOnPath == std::set<VarId>{3, 4});
  CHECK(classify(v) == RepairEligibility::Repairable);
  checkPolarity(v, allFalse(ik));
}

TEST_CASE("race kernel with the block guard before the write is safe") {
  InstrumentedKernel ik = instrument(loadCorpus("race"));
  CHECK(std::holds_alternative<verdict::Safe>(verify(ik, only(ik, {3}))));
  CHECK(std::holds_alternative<verdict::Safe>(verify(ik, only(ik, {4}))));
  CHECK(std::holds_alternative<verdict::Race>(verify(ik, only(ik, {1, 2}))));
}

TEST_CASE("a barrier under a thread-dependent branch diverges") {
  InstrumentedKernel ik = instrument(loadCorpus("divergence"));
  std::vector<bool> a = only(ik, {5});
  Verdict v = verify(ik, a);
  const auto* d = std::get_if<verdict::Divergence>(&v);
  REQUIRE(d);
  CHECK(d->at == 5);
  CHECK(d->enabledAtFault == std::set<VarId>{5});
  CHECK(d->witness.first == ThreadCoord{0, 0});
  CHECK(d->witness.second == ThreadCoord{0, 1});
  checkPolarity(v, a);
  CHECK(std::holds_alternative<verdict::Safe>(verify(ik, allFalse(ik))));
}

TEST_CASE("write-write race has no barrier on its path") {
  InstrumentedKernel ik = instrument(loadCorpus("write_write_race"));
  Verdict v = verify(ik, std::vector<bool>(ik.varCount(), true));
  const auto* r = std::get_if<verdict::Race>(&v);
  REQUIRE(r);
  CHECK(r->disabledOnPath.empty());
  CHECK(r->access1.kind == AccessKind::Write);
  CHECK(r->access2.kind == AccessKind::Write);
}

TEST_CASE("cross-block races need a grid barrier") {
  InstrumentedKernel ik = instrument(loadCorpus("interblock"));
  // b1/b2 before the read, b3/b4 before the write.
  Verdict blockOnly = verify(ik, only(ik, {3}));
  const auto* r = std::get_if<verdict::Race>(&blockOnly);
  REQUIRE(r);
  CHECK(r->access1.thread.block != r->access2.thread.block);
  CHECK(r->disabledOnPath == std::set<VarId>{4});
  CHECK(std::holds_alternative<verdict::Safe>(verify(ik, only(ik, {4}))));
}

TEST_CASE("classification") {
  CHECK(classify(verdict::Safe{}) == RepairEligibility::AlreadySafe);
  CHECK(classify(verdict::Other{"assertion failed"}) == RepairEligibility::NotRepairable);
  CHECK(classify(verdict::Race{}) == RepairEligibility::Repairable);
  CHECK(classify(verdict::Divergence{}) == RepairEligibility::Repairable);
}

TEST_CASE("assertion failures and runtime faults are other errors") {
  InstrumentedKernel ik = instrument(loadCorpus("assertion_failure"));
  Verdict v = verify(ik, allFalse(ik));
  REQUIRE(std::holds_alternative<verdict::Other>(v));
  CHECK(describe(v).find("assertion failed") != std::string::npos);

  InstrumentedKernel div = instrument(parse("kernel k(int P[]) { P[0] = 4 / tid; }"));
  Verdict f = verify(div, allFalse(div));
  REQUIRE(std::holds_alternative<verdict::Other>(f));
  CHECK(describe(f).find("division by zero") != std::string::npos);
}

TEST_CASE("step budget") {
  InstrumentedKernel ik = instrument(parse("kernel k(int P[]) { int i = 0; while (i < 100) unroll(64) { P[0] = i; i = i + 1; } }"));
  OracleConfig cfg;
  cfg.stepBudget = 50;
  CHECK_THROWS_AS(verify(ik, allFalse(ik), cfg), ResourceLimit);
  cfg.stepBudget = 100'000;
  CHECK(std::holds_alternative<verdict::Safe>(verify(ik, allFalse(ik), cfg)));
  CHECK_THROWS_AS(verify(ik, std::vector<bool>(1, false)), MissingAssignment);
}

TEST_CASE("loop iterations beyond the unroll bound are not executed") {
  const char* src = "kernel k(shared int A[]) <<<1, 2>>> { int i = 0; while (i < 5) unroll(1) { i = i + 1; } if (i == 2) { A[0] = tid; } }";
  InstrumentedKernel ik = instrument(parse(src));
  CHECK(std::holds_alternative<verdict::Safe>(verify(ik, allFalse(ik))));
  OracleConfig cfg;
  cfg.unroll = 2;
  CHECK(std::holds_alternative<verdict::Race>(verify(ik, allFalse(ik), cfg)));
}

TEST_CASE("launch override") {
  InstrumentedKernel ik = instrument(loadCorpus("race"));
  OracleConfig cfg;
  cfg.launch = LaunchConfig{1, 1};
  CHECK_THROWS(verify(ik, allFalse(ik), cfg));
  cfg.launch = LaunchConfig{2, 1};
  // One thread per block: the block-level guard no longer orders anything.
  Verdict v = verify(ik, only(ik, {3}), cfg);
  REQUIRE(std::holds_alternative<verdict::Race>(v));
}

TEST_CASE("determinism") {
  for (const std::string& name : barrierfix::testing::corpusNames()) {
    InstrumentedKernel ik = instrument(loadCorpus(name));
    std::vector<bool> a = allFalse(ik);
    CHECK(describe(verify(ik, a)) == describe(verify(ik, a)));
  }
}

TEST_CASE("trace dump is one JSON object per event") {
  InstrumentedKernel ik = instrument(loadCorpus("race"));
  Verdict v = verify(ik, allFalse(ik));
  std::ostringstream os;
  writeTraceJsonLines(os, std::get<verdict::Race>(v).witness, 1);
  std::istringstream in(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j["iteration"] == 1);
    CHECK(j.contains("event"));
    ++lines;
  }
  // Per thread: four barriers and two accesses.
  CHECK(lines == 12);
}

TEST_CASE("monotone error assumption on the corpus") {
  // Enabling barriers never creates a race; disabling never creates a divergence.
  for (const std::string& name : barrierfix::testing::corpusNames()) {
    CAPTURE(name);
    InstrumentedKernel ik = instrument(loadCorpus(name));
    std::size_t m = ik.varCount();
    if (m > 10) continue;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      std::vector<bool> a = barrierfix::testing::assignmentFromMask(mask, m);
      Verdict v = verify(ik, a);
      checkPolarity(v, a);
      bool raceFree = !std::holds_alternative<verdict::Race>(v);
      bool divergenceFree = !std::holds_alternative<verdict::Divergence>(v);
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<bool> b = a;
        b[i] = !b[i];
        Verdict w = verify(ik, b);
        if (b[i] && raceFree && std::holds_alternative<verdict::Race>(w)) FAIL_CHECK("enabling created a race");
        if (!b[i] && divergenceFree && std::holds_alternative<verdict::Divergence>(w)) {
          FAIL_CHECK("disabling created a divergence");
        }
      }
    }
  }
}

TEST_CASE("oracle agrees with the interleaving checker on random data-independent kernels") {
  std::mt19937 rng(7);
  std::map<std::string, int> seen;
  for (std::uint32_t seed = 1; seed <= 400; ++seed) {
    std::string src = barrierfix::testing::RandomKernel(seed, {2, 4, true, false, true}).generate();
    CAPTURE(src);
    InstrumentedKernel ik = instrument(parse(src));
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<bool> a(ik.varCount());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng() % 3 == 0;
      Verdict v = verify(ik, a);
      VerdictClass expected = barrierfix::testing::referenceVerdict(ik, a);
      CHECK(barrierfix::testing::className(classOf(v)) == barrierfix::testing::className(expected));
      checkPolarity(v, a);
      ++seen[barrierfix::testing::className(expected)];
    }
  }
  // The sample exercises every verdict class.
  CHECK(seen["safe"] > 0);
  CHECK(seen["race"] > 0);
  CHECK(seen["divergence"] > 0);
  MESSAGE("safe " << seen["safe"] << ", race " << seen["race"] << ", divergence " << seen["divergence"]);
}
