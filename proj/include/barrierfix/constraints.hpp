// Clauses over barrier variables and the two solving strategies: a greedy
// weighted minimal hitting set over the positive clauses, and an exact
// weighted partial MaxSAT search used directly or as the fallback.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <variant>
#include <vector>

#include "barrierfix/instrumenter.hpp"

namespace barrierfix {

enum class Polarity { Positive, Negative };

struct Literal {
  VarId var = 0;
  Polarity polarity = Polarity::Positive;

  auto operator<=>(const Literal&) const = default;
};

// A disjunction of literals, kept sorted by variable id.
class Clause {
 public:
  // Throws std::invalid_argument on an empty literal set or a variable that
  // appears twice.
  explicit Clause(std::vector<Literal> literals);

  static Clause positive(std::vector<VarId> vars);
  static Clause negative(std::vector<VarId> vars);

  const std::vector<Literal>& literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  bool isPositive() const;
  bool isNegative() const;
  bool isMonotone() const { return isPositive() || isNegative(); }
  VarId maxVar() const;

  // assignment[i] is the value of b_{i+1}.
  bool satisfiedBy(const std::vector<bool>& assignment) const;

  auto operator<=>(const Clause&) const = default;

 private:
  std::vector<Literal> literals_;
};

std::ostream& operator<<(std::ostream& os, const Clause& c);

// A conjunction of clauses. Duplicates are dropped on insertion; insertion
// order is otherwise preserved.
class Constraint {
 public:
  Constraint() = default;
  Constraint(std::initializer_list<Clause> clauses);

  bool add(Clause c);  // false if already present
  bool contains(const Clause& c) const;

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::vector<Clause> positiveClauses() const;
  std::vector<Clause> negativeClauses() const;
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  bool satisfiedBy(const std::vector<bool>& assignment) const;

 private:
  std::vector<Clause> clauses_;
};

using Weights = std::vector<std::int64_t>;  // weights[i] belongs to b_{i+1}

struct Solution {
  std::vector<bool> assignment;
  std::int64_t totalWeight = 0;

  bool value(VarId v) const { return assignment.at(static_cast<std::size_t>(v - 1)); }
  std::vector<VarId> trueVars() const;
};

Solution makeSolution(std::vector<bool> assignment, const Weights& weights);

struct Sat {
  Solution solution;
};
struct Unsat {};
using SolveResult = std::variant<Sat, Unsat>;

inline bool isSat(const SolveResult& r) { return std::holds_alternative<Sat>(r); }

class NonMonotoneInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Greedy weighted set cover over the positive clauses (smallest
// weight/coverage first, ties to the smaller id), pruned to a minimal
// hitting set. Unsat means the candidate violates a negative clause, not that
// the constraint is unsatisfiable.
SolveResult greedyMhs(const Constraint& phi, const Weights& weights);

// Exact minimum-weight model of the hard clauses; ties go to the
// lexicographically smallest assignment (false < true, b1 first).
SolveResult solveWPMS(const Constraint& hard, const Weights& weights);

enum class Strategy { Mhs, MaxSat };

struct SolveStats {
  int calls = 0;
  int fallbacks = 0;
};

SolveResult solve(const Constraint& phi, const Weights& weights, Strategy strategy,
                  SolveStats* stats = nullptr);

// "p wcnf <vars> <clauses> <top>": hard clauses carry weight top, and every
// variable contributes a soft unit clause -b_i with its weight.
void writeWcnf(std::ostream& os, const Constraint& hard, const Weights& weights);

}  // namespace barrierfix
