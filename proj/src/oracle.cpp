#include "barrierfix/oracle.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace barrierfix {

namespace {

struct Fault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Barrier identity for occurrence matching: the guard id when guarded, a
// negative per-statement key otherwise.
using BarrierKey = int;

struct Event {
  TraceEvent::Kind kind = TraceEvent::Kind::Access;
  AccessInfo access;
  BarrierKey key = 0;
  VarId var = 0;
  BarrierLevel level = BarrierLevel::Block;
  bool enabled = false;
  int occurrence = 0;
  SourceLoc loc;

  TraceEvent toTraceEvent() const {
    TraceEvent e;
    e.kind = kind;
    e.access = access;
    e.var = var;
    e.level = level;
    e.enabled = enabled;
    e.occurrence = occurrence;
    e.loc = loc;
    return e;
  }
};

using SharedMemory = std::map<std::pair<std::string, std::int64_t>, std::int64_t>;

struct Env {
  std::unordered_map<std::string, std::int64_t> scalars;
  std::unordered_map<std::string, std::string> arrayAlias;  // callee param -> kernel array
};

struct Frame {
  const Block* block = nullptr;
  std::size_t pc = 0;
  const While* loop = nullptr;  // set when this frame is a loop body
  int iterations = 0;
  std::size_t env = 0;
  const Function* callee = nullptr;  // set when this frame is a call body
  const Call* site = nullptr;
};

struct Context {
  const Kernel& kernel;
  const std::vector<bool>& assignment;
  LaunchConfig launch;
  std::optional<int> unroll;
  std::int64_t stepBudget;
  std::unordered_map<const Stmt*, BarrierKey> unguardedKeys;

  BarrierKey keyFor(const Stmt* s) {
    auto [it, inserted] =
        unguardedKeys.try_emplace(s, -static_cast<BarrierKey>(unguardedKeys.size()) - 1);
    return it->second;
  }
};

class ThreadRun {
 public:
  ThreadRun(Context& ctx, ThreadCoord coord) : ctx_(ctx), coord_(coord) {
    Env root;
    for (const Param& p : ctx.kernel.params) {
      if (!p.isArray) root.scalars[p.name] = p.scalarValue;
    }
    envs_.push_back(std::move(root));
    frames_.push_back(Frame{&ctx.kernel.body, 0, nullptr, 0, 0, nullptr, nullptr});
  }

  bool finished() const { return frames_.empty(); }
  const std::vector<Event>& events() const { return events_; }
  const std::optional<std::string>& fault() const { return fault_; }
  const std::vector<std::string>& assertionFailures() const { return assertionFailures_; }
  ThreadCoord coord() const { return coord_; }

  // Runs until just after the next enabled barrier, or to completion.
  void runToBarrier(SharedMemory& mem) {
    try {
      while (!frames_.empty()) {
        if (step(mem)) return;
      }
    } catch (const Fault& f) {
      fault_ = f.what();
      frames_.clear();
    }
  }

 private:
  void tick() {
    if (++steps_ > ctx_.stepBudget) {
      std::ostringstream os;
      os << "thread (" << coord_.block << ", " << coord_.tid << ") exceeded the step budget of "
         << ctx_.stepBudget;
      throw ResourceLimit(os.str());
    }
  }

  int boundFor(const While& w) const { return ctx_.unroll.value_or(w.unrollHint); }

  // Executes one statement or frame transition; true after an enabled barrier.
  bool step(SharedMemory& mem) {
    Frame& top = frames_.back();
    if (top.pc == top.block->stmts.size()) {
      finishFrame();
      return false;
    }
    const Stmt& s = top.block->stmts[top.pc++];
    tick();
    std::size_t env = top.env;
    return std::visit([&](const auto& n) { return exec(n, s, env, mem); }, s.node);
  }

  void finishFrame() {
    Frame done = frames_.back();
    if (done.loop) {
      tick();
      if (done.iterations < boundFor(*done.loop) && truthy(eval(*done.loop->cond, done.env, nullptr))) {
        frames_.back().pc = 0;
        ++frames_.back().iterations;
        return;
      }
      frames_.pop_back();
      return;
    }
    frames_.pop_back();
    if (done.callee) {
      if (done.callee->returnValue && done.site->result) {
        std::int64_t value = eval(*done.callee->returnValue, done.env, nullptr);
        envs_[frames_.back().env].scalars[*done.site->result] = value;
      }
      envs_.pop_back();
    }
  }

  bool exec(const Assign& a, const Stmt& s, std::size_t env, SharedMemory& mem) {
    std::int64_t value = eval(*a.value, env, &mem);
    if (!a.target.index) {
      envs_[env].scalars[a.target.name] = value;
      return false;
    }
    std::int64_t index = eval(*a.target.index, env, &mem);
    std::string array = resolveArray(a.target.name, env);
    if (isShared(array)) {
      Event e;
      e.kind = TraceEvent::Kind::Access;
      e.access = AccessInfo{array, index, AccessKind::Write, coord_, s.loc};
      e.loc = s.loc;
      events_.push_back(std::move(e));
      mem[{array, index}] = value;
    } else {
      privateMem_[{array, index}] = value;
    }
    return false;
  }

  bool exec(const Barrier& b, const Stmt& s, std::size_t, SharedMemory&) {
    Event e;
    e.kind = TraceEvent::Kind::Barrier;
    e.level = b.level;
    e.loc = s.loc;
    if (b.guard) {
      e.var = *b.guard;
      e.key = *b.guard;
      e.enabled = ctx_.assignment[static_cast<std::size_t>(*b.guard - 1)];
    } else {
      e.key = ctx_.keyFor(&s);
      e.enabled = true;
    }
    e.occurrence = ++occurrences_[e.key];
    bool enabled = e.enabled;
    events_.push_back(std::move(e));
    return enabled;
  }

  bool exec(const If& i, const Stmt&, std::size_t env, SharedMemory& mem) {
    const Block& chosen = truthy(eval(*i.cond, env, &mem)) ? i.thenBlock : i.elseBlock;
    frames_.push_back(Frame{&chosen, 0, nullptr, 0, env, nullptr, nullptr});
    return false;
  }

  bool exec(const While& w, const Stmt&, std::size_t env, SharedMemory& mem) {
    if (boundFor(w) > 0 && truthy(eval(*w.cond, env, &mem))) {
      frames_.push_back(Frame{&w.body, 0, &w, 1, env, nullptr, nullptr});
    }
    return false;
  }

  bool exec(const Call& c, const Stmt&, std::size_t env, SharedMemory& mem) {
    const Function* fn = ctx_.kernel.findFunction(c.callee);
    if (!fn) throw Fault("call to unknown function '" + c.callee + "'");
    Env callee;
    for (std::size_t i = 0; i < fn->params.size(); ++i) {
      const Param& p = fn->params[i];
      if (p.isArray) {
        const auto& ref = std::get<VarRef>(c.args[i]->node);
        callee.arrayAlias[p.name] = resolveArray(ref.name, env);
      } else {
        callee.scalars[p.name] = eval(*c.args[i], env, &mem);
      }
    }
    envs_.push_back(std::move(callee));
    frames_.push_back(Frame{&fn->body, 0, nullptr, 0, envs_.size() - 1, fn, &c});
    return false;
  }

  bool exec(const Assert& a, const Stmt& s, std::size_t env, SharedMemory& mem) {
    if (!truthy(eval(*a.cond, env, &mem))) {
      std::ostringstream os;
      os << "assertion failed at " << toString(s.loc) << " in thread (" << coord_.block << ", "
         << coord_.tid << ")";
      assertionFailures_.push_back(os.str());
    }
    return false;
  }

  std::string resolveArray(const std::string& name, std::size_t env) const {
    const auto& alias = envs_[env].arrayAlias;
    auto it = alias.find(name);
    return it == alias.end() ? name : it->second;
  }

  bool isShared(const std::string& kernelArray) const {
    const Param* p = ctx_.kernel.findParam(kernelArray);
    return p && p->space == MemorySpace::Shared;
  }

  static bool truthy(std::int64_t v) { return v != 0; }

  // mem == nullptr marks a context where shared reads cannot occur (loop
  // conditions and return values are lowered to be free of them).
  std::int64_t eval(const Expr& e, std::size_t env, SharedMemory* mem) {
    return std::visit(
        [&](const auto& n) -> std::int64_t {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            auto& scalars = envs_[env].scalars;
            auto it = scalars.find(n.name);
            if (it == scalars.end()) throw Fault("read of unset variable '" + n.name + "'");
            return it->second;
          } else if constexpr (std::is_same_v<T, BuiltinRef>) {
            switch (n.which) {
              case Builtin::ThreadId: return coord_.tid;
              case Builtin::BlockId: return coord_.block;
              case Builtin::BlockDim: return ctx_.launch.threadsPerBlock;
              case Builtin::GridDim: return ctx_.launch.blocks;
            }
            return 0;
          } else if constexpr (std::is_same_v<T, ArrayRead>) {
            std::int64_t index = eval(*n.index, env, mem);
            std::string array = resolveArray(n.array, env);
            if (!isShared(array)) {
              auto it = privateMem_.find({array, index});
              return it == privateMem_.end() ? 0 : it->second;
            }
            if (!mem) throw Fault("shared read outside a statement context");
            Event ev;
            ev.kind = TraceEvent::Kind::Access;
            ev.access = AccessInfo{array, index, AccessKind::Read, coord_, e.loc};
            ev.loc = e.loc;
            events_.push_back(std::move(ev));
            auto it = mem->find({array, index});
            return it == mem->end() ? 0 : it->second;
          } else if constexpr (std::is_same_v<T, Unary>) {
            std::int64_t v = eval(*n.operand, env, mem);
            return n.op == UnaryOp::Neg ? -v : static_cast<std::int64_t>(v == 0);
          } else {
            if (n.op == BinaryOp::And) {
              return eval(*n.lhs, env, mem) != 0 && eval(*n.rhs, env, mem) != 0;
            }
            if (n.op == BinaryOp::Or) {
              return eval(*n.lhs, env, mem) != 0 || eval(*n.rhs, env, mem) != 0;
            }
            std::int64_t l = eval(*n.lhs, env, mem);
            std::int64_t r = eval(*n.rhs, env, mem);
            switch (n.op) {
              case BinaryOp::Mul: return l * r;
              case BinaryOp::Div:
                if (r == 0) throw Fault("division by zero at " + toString(e.loc));
                return l / r;
              case BinaryOp::Mod:
                if (r == 0) throw Fault("modulo by zero at " + toString(e.loc));
                return l % r;
              case BinaryOp::Add: return l + r;
              case BinaryOp::Sub: return l - r;
              case BinaryOp::Lt: return l < r;
              case BinaryOp::Le: return l <= r;
              case BinaryOp::Gt: return l > r;
              case BinaryOp::Ge: return l >= r;
              case BinaryOp::Eq: return l == r;
              case BinaryOp::Ne: return l != r;
              default: return 0;
            }
          }
        },
        e.node);
  }

  Context& ctx_;
  ThreadCoord coord_;
  std::vector<Env> envs_;
  std::vector<Frame> frames_;
  std::map<std::pair<std::string, std::int64_t>, std::int64_t> privateMem_;
  std::vector<Event> events_;
  std::map<BarrierKey, int> occurrences_;
  std::int64_t steps_ = 0;
  std::optional<std::string> fault_;
  std::vector<std::string> assertionFailures_;
};

// ---------------------------------------------------------------------------
// Pair analysis

using Occurrence = std::pair<BarrierKey, int>;

bool relevant(const Event& e, bool sameBlock) {
  return e.kind == TraceEvent::Kind::Barrier && (sameBlock || e.level == BarrierLevel::Grid);
}

std::vector<Occurrence> syncSequence(const std::vector<Event>& events, bool sameBlock) {
  std::vector<Occurrence> seq;
  for (const Event& e : events) {
    if (relevant(e, sameBlock) && e.enabled) seq.emplace_back(e.key, e.occurrence);
  }
  return seq;
}

Witness makeWitness(const ThreadRun& a, const ThreadRun& b) {
  Witness w;
  w.first = a.coord();
  w.second = b.coord();
  for (const Event& e : a.events()) w.firstLog.push_back(e.toTraceEvent());
  for (const Event& e : b.events()) w.secondLog.push_back(e.toTraceEvent());
  return w;
}

// The enabled guarded barriers the two threads reach a different number of
// times; with all of them on, the sequences necessarily differ again. When
// every count agrees (only the order differs) the whole sequences are blamed.
verdict::Divergence divergenceFor(const ThreadRun& a, const ThreadRun& b, bool sameBlock,
                                  const std::vector<Occurrence>& seqA,
                                  const std::vector<Occurrence>& seqB) {
  std::map<BarrierKey, std::pair<int, int>> counts;
  for (const auto& [key, occ] : seqA) ++counts[key].first;
  for (const auto& [key, occ] : seqB) ++counts[key].second;
  verdict::Divergence d;
  for (const auto& [key, c] : counts) {
    if (key > 0 && c.first != c.second) d.enabledAtFault.insert(key);
  }
  if (d.enabledAtFault.empty()) {
    for (const auto& [key, c] : counts) {
      if (key > 0) d.enabledAtFault.insert(key);
    }
  }
  std::size_t i = 0;
  while (i < seqA.size() && i < seqB.size() && seqA[i] == seqB[i]) ++i;
  BarrierKey first = i < seqA.size() ? seqA[i].first : (i < seqB.size() ? seqB[i].first : 0);
  if (first > 0 && d.enabledAtFault.count(first)) {
    d.at = first;
  } else if (!d.enabledAtFault.empty()) {
    d.at = *d.enabledAtFault.begin();
  }
  (void)sameBlock;
  d.witness = makeWitness(a, b);
  return d;
}

std::set<Occurrence> disabledOccurrences(const std::vector<Event>& events, std::size_t from,
                                         std::size_t to, bool sameBlock) {
  std::set<Occurrence> out;
  for (std::size_t i = from; i < to; ++i) {
    const Event& e = events[i];
    if (relevant(e, sameBlock) && !e.enabled && e.var > 0) out.emplace(e.key, e.occurrence);
  }
  return out;
}

// Disabled barrier occurrences that both threads pass on opposite sides of
// their conflicting accesses: enabling any of them orders the two accesses.
std::set<VarId> separatingBarriers(const std::vector<Event>& ea, std::size_t pa,
                                   const std::vector<Event>& eb, std::size_t pb, bool sameBlock) {
  std::set<VarId> out;
  auto collect = [&](const std::set<Occurrence>& x, const std::set<Occurrence>& y) {
    for (const Occurrence& o : x) {
      if (y.count(o)) out.insert(o.first);
    }
  };
  collect(disabledOccurrences(ea, pa + 1, ea.size(), sameBlock),
          disabledOccurrences(eb, 0, pb, sameBlock));
  collect(disabledOccurrences(ea, 0, pa, sameBlock),
          disabledOccurrences(eb, pb + 1, eb.size(), sameBlock));
  return out;
}

std::vector<int> epochs(const std::vector<Event>& events, bool sameBlock) {
  std::vector<int> out(events.size());
  int epoch = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    out[i] = epoch;
    if (relevant(events[i], sameBlock) && events[i].enabled) ++epoch;
  }
  return out;
}

std::optional<verdict::Race> raceFor(const ThreadRun& a, const ThreadRun& b, bool sameBlock) {
  const auto& ea = a.events();
  const auto& eb = b.events();
  std::vector<int> epochA = epochs(ea, sameBlock);
  std::vector<int> epochB = epochs(eb, sameBlock);
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].kind != TraceEvent::Kind::Access) continue;
    const AccessInfo& x = ea[i].access;
    for (std::size_t j = 0; j < eb.size(); ++j) {
      if (eb[j].kind != TraceEvent::Kind::Access || epochA[i] != epochB[j]) continue;
      const AccessInfo& y = eb[j].access;
      if (x.array != y.array || x.indexValue != y.indexValue) continue;
      if (x.kind == AccessKind::Read && y.kind == AccessKind::Read) continue;
      verdict::Race r;
      r.access1 = x;
      r.access2 = y;
      r.disabledOnPath = separatingBarriers(ea, i, eb, j, sameBlock);
      r.witness = makeWitness(a, b);
      return r;
    }
  }
  return std::nullopt;
}

std::string threadName(const ThreadCoord& t) {
  std::ostringstream os;
  os << "(" << t.block << ", " << t.tid << ")";
  return os.str();
}

std::string varList(const std::set<VarId>& vars) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (VarId v : vars) {
    os << (first ? "" : ", ") << 'b' << v;
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace

Verdict verify(const InstrumentedKernel& ik, const std::vector<bool>& assignment,
               const OracleConfig& cfg) {
  if (assignment.size() != ik.vars.size()) {
    throw MissingAssignment("solution assigns " + std::to_string(assignment.size()) + " of " +
                            std::to_string(ik.vars.size()) + " barrier variables");
  }
  Context ctx{ik.kernel, assignment, cfg.launch.value_or(ik.kernel.launch), cfg.unroll,
              cfg.stepBudget, {}};
  if (ctx.launch.totalThreads() < 2 || ctx.launch.blocks < 1 || ctx.launch.threadsPerBlock < 1) {
    throw std::invalid_argument("launch must have at least two threads");
  }

  std::vector<ThreadRun> threads;
  for (int b = 0; b < ctx.launch.blocks; ++b) {
    for (int t = 0; t < ctx.launch.threadsPerBlock; ++t) threads.emplace_back(ctx, ThreadCoord{b, t});
  }
  SharedMemory mem;
  for (bool pending = true; pending;) {
    pending = false;
    for (ThreadRun& t : threads) {
      if (t.finished()) continue;
      t.runToBarrier(mem);
      pending = pending || !t.finished();
    }
  }

  for (const ThreadRun& t : threads) {
    if (t.fault()) return verdict::Other{*t.fault() + " in thread " + threadName(t.coord())};
  }

  for (std::size_t i = 0; i < threads.size(); ++i) {
    for (std::size_t j = i + 1; j < threads.size(); ++j) {
      const ThreadRun& a = threads[i];
      const ThreadRun& b = threads[j];
      bool sameBlock = a.coord().block == b.coord().block;
      auto seqA = syncSequence(a.events(), sameBlock);
      auto seqB = syncSequence(b.events(), sameBlock);
      if (seqA != seqB) return divergenceFor(a, b, sameBlock, seqA, seqB);
      if (auto race = raceFor(a, b, sameBlock)) return *race;
    }
  }

  for (const ThreadRun& t : threads) {
    if (!t.assertionFailures().empty()) return verdict::Other{t.assertionFailures().front()};
  }
  return verdict::Safe{};
}

RepairEligibility classify(const Verdict& v) {
  if (std::holds_alternative<verdict::Safe>(v)) return RepairEligibility::AlreadySafe;
  if (std::holds_alternative<verdict::Other>(v)) return RepairEligibility::NotRepairable;
  return RepairEligibility::Repairable;
}

std::string describe(const Verdict& v) {
  std::ostringstream os;
  if (std::holds_alternative<verdict::Safe>(v)) {
    os << "safe";
  } else if (const auto* r = std::get_if<verdict::Race>(&v)) {
    auto access = [](const AccessInfo& a) {
      std::ostringstream s;
      s << (a.kind == AccessKind::Read ? "read " : "write ") << a.array << '[' << a.indexValue
        << "] by thread " << threadName(a.thread) << " at " << toString(a.loc);
      return s.str();
    };
    os << "data race: " << access(r->access1) << " vs " << access(r->access2)
       << "; disabled barriers between them " << varList(r->disabledOnPath);
  } else if (const auto* d = std::get_if<verdict::Divergence>(&v)) {
    os << "barrier divergence between threads " << threadName(d->witness.first) << " and "
       << threadName(d->witness.second) << " at b" << d->at << "; enabled barriers involved "
       << varList(d->enabledAtFault);
  } else {
    os << "error: " << std::get<verdict::Other>(v).description;
  }
  return os.str();
}

void writeTraceJsonLines(std::ostream& os, const Witness& witness, int iteration) {
  auto emit = [&](const ThreadCoord& who, const std::vector<TraceEvent>& log) {
    for (std::size_t i = 0; i < log.size(); ++i) {
      const TraceEvent& e = log[i];
      nlohmann::ordered_json j;
      j["iteration"] = iteration;
      j["thread"] = {{"block", who.block}, {"tid", who.tid}};
      j["seq"] = i;
      if (e.kind == TraceEvent::Kind::Access) {
        j["event"] = e.access.kind == AccessKind::Read ? "read" : "write";
        j["array"] = e.access.array;
        j["index"] = e.access.indexValue;
      } else {
        j["event"] = "barrier";
        j["var"] = e.var;
        j["level"] = e.level == BarrierLevel::Grid ? "grid" : "block";
        j["enabled"] = e.enabled;
        j["occurrence"] = e.occurrence;
      }
      j["line"] = e.loc.line;
      j["col"] = e.loc.col;
      os << j.dump() << '\n';
    }
  };
  emit(witness.first, witness.firstLog);
  emit(witness.second, witness.secondLog);
}

}  // namespace barrierfix
