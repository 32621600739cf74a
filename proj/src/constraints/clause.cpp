#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "barrierfix/constraints.hpp"

namespace barrierfix {

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  if (literals_.empty()) throw std::invalid_argument("clause must have at least one literal");
  std::sort(literals_.begin(), literals_.end());
  for (std::size_t i = 0; i < literals_.size(); ++i) {
    if (literals_[i].var < 1) throw std::invalid_argument("barrier variable ids start at 1");
    if (i > 0 && literals_[i].var == literals_[i - 1].var) {
      throw std::invalid_argument("variable b" + std::to_string(literals_[i].var) +
                                  " appears twice in a clause");
    }
  }
}

Clause Clause::positive(std::vector<VarId> vars) {
  std::vector<Literal> lits;
  for (VarId v : vars) lits.push_back({v, Polarity::Positive});
  return Clause(std::move(lits));
}

Clause Clause::negative(std::vector<VarId> vars) {
  std::vector<Literal> lits;
  for (VarId v : vars) lits.push_back({v, Polarity::Negative});
  return Clause(std::move(lits));
}

bool Clause::isPositive() const {
  return std::all_of(literals_.begin(), literals_.end(),
                     [](const Literal& l) { return l.polarity == Polarity::Positive; });
}

bool Clause::isNegative() const {
  return std::all_of(literals_.begin(), literals_.end(),
                     [](const Literal& l) { return l.polarity == Polarity::Negative; });
}

VarId Clause::maxVar() const { return literals_.back().var; }

bool Clause::satisfiedBy(const std::vector<bool>& assignment) const {
  for (const Literal& l : literals_) {
    bool value = assignment.at(static_cast<std::size_t>(l.var - 1));
    if (value == (l.polarity == Polarity::Positive)) return true;
  }
  return false;
}

std::ostream& operator<<(std::ostream& os, const Clause& c) {
  os << '(';
  bool first = true;
  for (const Literal& l : c.literals()) {
    if (!first) os << " | ";
    first = false;
    if (l.polarity == Polarity::Negative) os << '!';
    os << 'b' << l.var;
  }
  return os << ')';
}

Constraint::Constraint(std::initializer_list<Clause> clauses) {
  for (const Clause& c : clauses) add(c);
}

bool Constraint::add(Clause c) {
  if (contains(c)) return false;
  clauses_.push_back(std::move(c));
  return true;
}

bool Constraint::contains(const Clause& c) const {
  return std::find(clauses_.begin(), clauses_.end(), c) != clauses_.end();
}

std::vector<Clause> Constraint::positiveClauses() const {
  std::vector<Clause> out;
  std::copy_if(clauses_.begin(), clauses_.end(), std::back_inserter(out),
               [](const Clause& c) { return c.isPositive(); });
  return out;
}

std::vector<Clause> Constraint::negativeClauses() const {
  std::vector<Clause> out;
  std::copy_if(clauses_.begin(), clauses_.end(), std::back_inserter(out),
               [](const Clause& c) { return c.isNegative(); });
  return out;
}

bool Constraint::satisfiedBy(const std::vector<bool>& assignment) const {
  return std::all_of(clauses_.begin(), clauses_.end(),
                     [&](const Clause& c) { return c.satisfiedBy(assignment); });
}

std::vector<VarId> Solution::trueVars() const {
  std::vector<VarId> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i]) out.push_back(static_cast<VarId>(i + 1));
  }
  return out;
}

Solution makeSolution(std::vector<bool> assignment, const Weights& weights) {
  Solution s;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i]) s.totalWeight += weights.at(i);
  }
  s.assignment = std::move(assignment);
  return s;
}

void writeWcnf(std::ostream& os, const Constraint& hard, const Weights& weights) {
  std::int64_t top = std::accumulate(weights.begin(), weights.end(), std::int64_t{0}) + 1;
  os << "p wcnf " << weights.size() << ' ' << hard.size() + weights.size() << ' ' << top << '\n';
  for (const Clause& c : hard.clauses()) {
    os << top;
    for (const Literal& l : c.literals()) {
      os << ' ' << (l.polarity == Polarity::Negative ? -l.var : l.var);
    }
    os << " 0\n";
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    os << weights[i] << " -" << i + 1 << " 0\n";
  }
}

}  // namespace barrierfix
