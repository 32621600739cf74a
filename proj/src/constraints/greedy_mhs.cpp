#include <algorithm>
#include <string>

#include "barrierfix/constraints.hpp"

namespace barrierfix {

namespace {

void checkRange(const Clause& c, const Weights& weights) {
  if (static_cast<std::size_t>(c.maxVar()) > weights.size()) {
    throw std::invalid_argument("clause mentions b" + std::to_string(c.maxVar()) +
                                " but only " + std::to_string(weights.size()) +
                                " variables are weighted");
  }
}

bool hitsAll(const std::vector<Clause>& clauses, const std::vector<bool>& chosen) {
  return std::all_of(clauses.begin(), clauses.end(),
                     [&](const Clause& c) { return c.satisfiedBy(chosen); });
}

}  // namespace

SolveResult greedyMhs(const Constraint& phi, const Weights& weights) {
  for (const Clause& c : phi.clauses()) {
    if (!c.isMonotone()) throw NonMonotoneInput("greedy hitting set needs monotone clauses");
    checkRange(c, weights);
  }
  const std::vector<Clause> positives = phi.positiveClauses();
  const std::size_t m = weights.size();

  std::vector<bool> chosen(m, false);
  std::vector<bool> covered(positives.size(), false);
  std::size_t remaining = positives.size();
  std::vector<std::int64_t> coverage(m + 1);

  while (remaining > 0) {
    std::fill(coverage.begin(), coverage.end(), 0);
    for (std::size_t ci = 0; ci < positives.size(); ++ci) {
      if (covered[ci]) continue;
      for (const Literal& l : positives[ci].literals()) ++coverage[static_cast<std::size_t>(l.var)];
    }
    VarId best = 0;
    for (VarId v = 1; v <= static_cast<VarId>(m); ++v) {
      std::int64_t cov = coverage[static_cast<std::size_t>(v)];
      if (cov == 0) continue;
      if (best == 0) {
        best = v;
        continue;
      }
      // weight(v)/cov(v) < weight(best)/cov(best), cross-multiplied
      std::int64_t lhs = weights[static_cast<std::size_t>(v - 1)] * coverage[static_cast<std::size_t>(best)];
      std::int64_t rhs = weights[static_cast<std::size_t>(best - 1)] * cov;
      if (lhs < rhs) best = v;
    }
    chosen[static_cast<std::size_t>(best - 1)] = true;
    for (std::size_t ci = 0; ci < positives.size(); ++ci) {
      if (!covered[ci] && positives[ci].satisfiedBy(chosen)) {
        covered[ci] = true;
        --remaining;
      }
    }
  }

  // Prune to a minimal hitting set, heaviest first.
  std::vector<VarId> order;
  for (std::size_t i = 0; i < m; ++i) {
    if (chosen[i]) order.push_back(static_cast<VarId>(i + 1));
  }
  std::sort(order.begin(), order.end(), [&](VarId a, VarId b) {
    std::int64_t wa = weights[static_cast<std::size_t>(a - 1)];
    std::int64_t wb = weights[static_cast<std::size_t>(b - 1)];
    return wa != wb ? wa > wb : a > b;
  });
  for (VarId v : order) {
    chosen[static_cast<std::size_t>(v - 1)] = false;
    if (!hitsAll(positives, chosen)) chosen[static_cast<std::size_t>(v - 1)] = true;
  }

  if (!hitsAll(phi.negativeClauses(), chosen)) return Unsat{};
  return Sat{makeSolution(std::move(chosen), weights)};
}

SolveResult solve(const Constraint& phi, const Weights& weights, Strategy strategy,
                  SolveStats* stats) {
  if (stats) ++stats->calls;
  if (strategy == Strategy::MaxSat) return solveWPMS(phi, weights);
  SolveResult greedy = greedyMhs(phi, weights);
  if (isSat(greedy)) return greedy;
  if (stats) ++stats->fallbacks;
  return solveWPMS(phi, weights);
}

}  // namespace barrierfix
