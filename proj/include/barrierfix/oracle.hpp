// Enumerative race and divergence oracle.
//
// Every thread of the launch is executed under a fixed round-robin schedule
// (each thread runs to its next enabled barrier, then the next thread goes),
// recording shared accesses and barrier occurrences. The recorded traces are
// then checked pairwise, the way a two-thread abstraction would check one
// nondeterministically chosen pair: barrier occurrence sequences must agree
// (otherwise the pair diverges) and conflicting accesses must be separated by
// a barrier both threads pass.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "barrierfix/instrumenter.hpp"

namespace barrierfix {

struct ThreadCoord {
  int block = 0;
  int tid = 0;

  auto operator<=>(const ThreadCoord&) const = default;
};

enum class AccessKind { Read, Write };

struct AccessInfo {
  std::string array;
  std::int64_t indexValue = 0;
  AccessKind kind = AccessKind::Read;
  ThreadCoord thread;
  SourceLoc loc;
};

// One entry of a thread's execution log.
struct TraceEvent {
  enum class Kind { Access, Barrier };
  Kind kind = Kind::Access;
  AccessInfo access;           // Kind::Access
  VarId var = 0;               // Kind::Barrier; 0 for an unguarded barrier
  BarrierLevel level = BarrierLevel::Block;
  bool enabled = false;
  int occurrence = 0;          // 1-based count of this barrier for the thread
  SourceLoc loc;
};

struct Witness {
  ThreadCoord first;
  ThreadCoord second;
  std::vector<TraceEvent> firstLog;
  std::vector<TraceEvent> secondLog;
};

namespace verdict {

struct Safe {};
struct Race {
  AccessInfo access1;
  AccessInfo access2;
  std::set<VarId> disabledOnPath;
  Witness witness;
};
struct Divergence {
  VarId at = 0;
  std::set<VarId> enabledAtFault;
  Witness witness;
};
struct Other {
  std::string description;
};

}  // namespace verdict

using Verdict = std::variant<verdict::Safe, verdict::Race, verdict::Divergence, verdict::Other>;

std::string describe(const Verdict& v);

enum class RepairEligibility { Repairable, NotRepairable, AlreadySafe };

RepairEligibility classify(const Verdict& v);

struct OracleConfig {
  std::optional<LaunchConfig> launch;  // defaults to the kernel's own
  std::optional<int> unroll;           // overrides every loop's unroll hint
  std::int64_t stepBudget = 100'000;   // per thread
};

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// assignment[i] is the value of b_{i+1}. Throws MissingAssignment when the
// assignment is not total and ResourceLimit when a thread exceeds the step
// budget.
Verdict verify(const InstrumentedKernel& ik, const std::vector<bool>& assignment,
               const OracleConfig& cfg = {});

// The witness pair's logs as JSON lines.
void writeTraceJsonLines(std::ostream& os, const Witness& witness, int iteration);

}  // namespace barrierfix
