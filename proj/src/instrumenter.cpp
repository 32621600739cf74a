#include "barrierfix/instrumenter.hpp"

#include <algorithm>
#include <string>

namespace barrierfix {

std::int64_t barrierWeight(BarrierLevel level, int loopDepth, const WeightConfig& cfg) {
  int depth = std::clamp(loopDepth, 0, kMaxWeightedLoopDepth);
  std::int64_t loopTerm = 1;
  for (int i = 0; i < depth; ++i) loopTerm *= cfg.loopWeight;
  return (level == BarrierLevel::Grid ? cfg.gridWeight : 0) + loopTerm;
}

std::vector<std::int64_t> InstrumentedKernel::weights() const {
  std::vector<std::int64_t> w;
  w.reserve(vars.size());
  for (const BarrierVariable& v : vars) w.push_back(v.weight);
  return w;
}

namespace {

bool alreadyInstrumented(const Block& b) {
  for (const Stmt& s : b.stmts) {
    if (const auto* bar = std::get_if<Barrier>(&s.node)) {
      if (bar->guard || bar->origin == BarrierOrigin::Instrumented) return true;
    } else if (const auto* i = std::get_if<If>(&s.node)) {
      if (alreadyInstrumented(i->thenBlock) || alreadyInstrumented(i->elseBlock)) return true;
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      if (alreadyInstrumented(w->body)) return true;
    }
  }
  return false;
}

class Instrumenter {
 public:
  Instrumenter(const Kernel& source, const WeightConfig& cfg) : source_(source), cfg_(cfg) {}

  InstrumentedKernel run() {
    InstrumentedKernel ik;
    ik.sourceKernel = source_;
    ik.kernel = source_;
    ik.kernel.body = block(source_.body, 0, false, source_.loc);
    ik.vars = std::move(vars_);
    return ik;
  }

 private:
  // Rules, merged per program point: before a shared access or a call with a
  // shared argument, before an If (the branch entry point), and at the head
  // of every loop body.
  bool needsPoint(const Stmt& s) const {
    return touchesShared(source_, s) || std::holds_alternative<If>(s.node);
  }

  void insertPoint(Block& out, const SourceLoc& loc, int depth) {
    addGuarded(out, BarrierLevel::Block, BarrierOrigin::Instrumented, loc, depth);
    if (cfg_.gridEnabled) {
      addGuarded(out, BarrierLevel::Grid, BarrierOrigin::Instrumented, loc, depth);
    }
  }

  void addGuarded(Block& out, BarrierLevel level, BarrierOrigin origin, const SourceLoc& loc,
                  int depth) {
    BarrierVariable v;
    v.id = static_cast<VarId>(vars_.size()) + 1;
    v.loc = loc;
    v.level = level;
    v.origin = origin;
    v.loopDepth = depth;
    v.weight = barrierWeight(level, depth, cfg_);
    vars_.push_back(v);
    out.stmts.push_back(Stmt{Barrier{level, origin, v.id}, loc});
  }

  Block block(const Block& in, int depth, bool loopHead, const SourceLoc& headLoc) {
    Block out;
    if (loopHead && in.stmts.empty()) insertPoint(out, headLoc, depth);
    for (std::size_t i = 0; i < in.stmts.size(); ++i) {
      const Stmt& s = in.stmts[i];
      if ((loopHead && i == 0) || needsPoint(s)) insertPoint(out, s.loc, depth);
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Barrier>) {
              if (cfg_.inspectExisting) {
                addGuarded(out, n.level, BarrierOrigin::Programmer, s.loc, depth);
              } else {
                out.stmts.push_back(s);
              }
            } else if constexpr (std::is_same_v<T, If>) {
              If copy = n;
              copy.thenBlock = block(n.thenBlock, depth, false, s.loc);
              copy.elseBlock = block(n.elseBlock, depth, false, s.loc);
              out.stmts.push_back(Stmt{std::move(copy), s.loc});
            } else if constexpr (std::is_same_v<T, While>) {
              While copy = n;
              copy.body = block(n.body, depth + 1, true, s.loc);
              out.stmts.push_back(Stmt{std::move(copy), s.loc});
            } else {
              out.stmts.push_back(s);
            }
          },
          s.node);
    }
    return out;
  }

  const Kernel& source_;
  const WeightConfig& cfg_;
  std::vector<BarrierVariable> vars_;
};

Block applyToBlock(const Block& in, const std::vector<bool>& assignment) {
  Block out;
  for (const Stmt& s : in.stmts) {
    if (const auto* b = std::get_if<Barrier>(&s.node)) {
      if (!b->guard) {
        out.stmts.push_back(s);
      } else if (assignment[static_cast<std::size_t>(*b->guard - 1)]) {
        out.stmts.push_back(Stmt{Barrier{b->level, BarrierOrigin::Programmer, std::nullopt}, s.loc});
      }
    } else if (const auto* i = std::get_if<If>(&s.node)) {
      If copy = *i;
      copy.thenBlock = applyToBlock(i->thenBlock, assignment);
      copy.elseBlock = applyToBlock(i->elseBlock, assignment);
      out.stmts.push_back(Stmt{std::move(copy), s.loc});
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      While copy = *w;
      copy.body = applyToBlock(w->body, assignment);
      out.stmts.push_back(Stmt{std::move(copy), s.loc});
    } else {
      out.stmts.push_back(s);
    }
  }
  return out;
}

}  // namespace

InstrumentedKernel instrument(const Kernel& kernel, const WeightConfig& cfg) {
  if (cfg.gridWeight < 1 || cfg.loopWeight < 1) {
    throw InstrumentationError("grid and loop weights must be at least 1");
  }
  if (alreadyInstrumented(kernel.body)) {
    throw InstrumentationError("kernel '" + kernel.name + "' is already instrumented");
  }
  return Instrumenter(kernel, cfg).run();
}

Kernel applySolution(const InstrumentedKernel& ik, const std::vector<bool>& assignment) {
  if (assignment.size() != ik.vars.size()) {
    throw MissingAssignment("solution assigns " + std::to_string(assignment.size()) +
                            " of " + std::to_string(ik.vars.size()) + " barrier variables");
  }
  Kernel out = ik.kernel;
  out.body = applyToBlock(ik.kernel.body, assignment);
  return out;
}

}  // namespace barrierfix
