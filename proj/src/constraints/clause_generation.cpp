#include "barrierfix/clause_generation.hpp"

namespace barrierfix {

Clause generateClause(const Verdict& v) {
  if (const auto* r = std::get_if<verdict::Race>(&v)) {
    if (r->disabledOnPath.empty()) {
      throw EmptyWitness("no barrier variable can separate the racing accesses: " + describe(v));
    }
    return Clause::positive({r->disabledOnPath.begin(), r->disabledOnPath.end()});
  }
  if (const auto* d = std::get_if<verdict::Divergence>(&v)) {
    if (d->enabledAtFault.empty()) {
      throw EmptyWitness("the divergent barriers carry no barrier variable: " + describe(v));
    }
    return Clause::negative({d->enabledAtFault.begin(), d->enabledAtFault.end()});
  }
  throw std::invalid_argument("no clause for verdict: " + describe(v));
}

}  // namespace barrierfix
