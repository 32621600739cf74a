// Exact weighted partial MaxSAT by branch and bound.
//
// Variables are branched in id order with false tried first, so complete
// assignments are visited in lexicographic order. Subtrees are pruned only
// when they cannot strictly improve on the incumbent, which makes the first
// optimum found the lexicographically smallest one.
#include <algorithm>
#include <limits>
#include <string>

#include "barrierfix/constraints.hpp"

namespace barrierfix {

namespace {

constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

class BranchAndBound {
 public:
  BranchAndBound(const Constraint& hard, const Weights& weights)
      : clauses_(hard.clauses()), weights_(weights), value_(weights.size(), kUnassigned) {
    occursPositively_.assign(weights.size(), false);
    for (const Clause& c : clauses_) {
      if (static_cast<std::size_t>(c.maxVar()) > weights.size()) {
        throw std::invalid_argument("clause mentions b" + std::to_string(c.maxVar()) +
                                    " but only " + std::to_string(weights.size()) +
                                    " variables are weighted");
      }
      for (const Literal& l : c.literals()) {
        if (l.polarity == Polarity::Positive) occursPositively_[index(l.var)] = true;
      }
    }
  }

  SolveResult run() {
    // A variable that never occurs positively is best left false: that
    // satisfies every clause it appears in at zero cost.
    for (std::size_t i = 0; i < value_.size(); ++i) {
      if (!occursPositively_[i]) assign(i, kFalse);
    }
    search();
    if (bestWeight_ == kInfinity) return Unsat{};
    return Sat{makeSolution(std::move(best_), weights_)};
  }

 private:
  static constexpr signed char kUnassigned = -1;
  static constexpr signed char kFalse = 0;
  static constexpr signed char kTrue = 1;

  static std::size_t index(VarId v) { return static_cast<std::size_t>(v - 1); }

  void assign(std::size_t i, signed char v) {
    value_[i] = v;
    trail_.push_back(i);
    if (v == kTrue) weight_ += weights_[i];
  }

  void undoTo(std::size_t mark) {
    while (trail_.size() > mark) {
      std::size_t i = trail_.back();
      trail_.pop_back();
      if (value_[i] == kTrue) weight_ -= weights_[i];
      value_[i] = kUnassigned;
    }
  }

  bool literalTrue(const Literal& l) const {
    signed char v = value_[index(l.var)];
    return v != kUnassigned && (v == kTrue) == (l.polarity == Polarity::Positive);
  }

  // Unit propagation to fixpoint; false on conflict.
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Clause& c : clauses_) {
        const Literal* open = nullptr;
        int openCount = 0;
        bool satisfied = false;
        for (const Literal& l : c.literals()) {
          if (value_[index(l.var)] == kUnassigned) {
            open = &l;
            ++openCount;
          } else if (literalTrue(l)) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        if (openCount == 0) return false;
        if (openCount == 1) {
          assign(index(open->var), open->polarity == Polarity::Positive ? kTrue : kFalse);
          changed = true;
        }
      }
    }
    return true;
  }

  // Unsatisfied clauses whose open literals are all positive must each get
  // one more true variable; over pairwise disjoint such clauses the cheapest
  // candidates add up to a valid lower bound.
  std::int64_t lowerBound() {
    std::int64_t bound = weight_;
    std::fill(usedForBound_.begin(), usedForBound_.end(), false);
    usedForBound_.resize(value_.size(), false);
    for (const Clause& c : clauses_) {
      std::int64_t cheapest = kInfinity;
      bool usable = true;
      for (const Literal& l : c.literals()) {
        signed char v = value_[index(l.var)];
        if (v != kUnassigned) {
          if (literalTrue(l)) {
            usable = false;
            break;
          }
          continue;
        }
        if (l.polarity == Polarity::Negative || usedForBound_[index(l.var)]) {
          usable = false;
          break;
        }
        cheapest = std::min(cheapest, weights_[index(l.var)]);
      }
      if (!usable || cheapest == kInfinity) continue;
      for (const Literal& l : c.literals()) {
        if (value_[index(l.var)] == kUnassigned) usedForBound_[index(l.var)] = true;
      }
      bound += cheapest;
    }
    return bound;
  }

  void search() {
    std::size_t mark = trail_.size();
    if (!propagate() || lowerBound() >= bestWeight_) {
      undoTo(mark);
      return;
    }
    auto next = std::find(value_.begin(), value_.end(), kUnassigned);
    if (next == value_.end()) {
      bestWeight_ = weight_;
      best_.assign(value_.size(), false);
      for (std::size_t i = 0; i < value_.size(); ++i) best_[i] = value_[i] == kTrue;
      undoTo(mark);
      return;
    }
    std::size_t i = static_cast<std::size_t>(next - value_.begin());
    for (signed char choice : {kFalse, kTrue}) {
      std::size_t branchMark = trail_.size();
      assign(i, choice);
      search();
      undoTo(branchMark);
    }
    undoTo(mark);
  }

  const std::vector<Clause>& clauses_;
  const Weights& weights_;
  std::vector<signed char> value_;
  std::vector<bool> occursPositively_;
  std::vector<bool> usedForBound_;
  std::vector<std::size_t> trail_;
  std::int64_t weight_ = 0;
  std::int64_t bestWeight_ = kInfinity;
  std::vector<bool> best_;
};

}  // namespace

SolveResult solveWPMS(const Constraint& hard, const Weights& weights) {
  return BranchAndBound(hard, weights).run();
}

}  // namespace barrierfix
