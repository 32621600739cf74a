// Blocking clauses from verifier verdicts.
#pragma once

#include <stdexcept>

#include "barrierfix/constraints.hpp"
#include "barrierfix/oracle.hpp"

namespace barrierfix {

// The trace involves no barrier variable, so no assignment can block it.
class EmptyWitness : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Race -> (b_i | ... ) over disabledOnPath; Divergence -> (!b_i | ...) over
// enabledAtFault. Throws EmptyWitness on an empty set and
// std::invalid_argument for Safe or Other.
Clause generateClause(const Verdict& v);

}  // namespace barrierfix
