#pragma once

#include "markovmono/chain.hpp"

namespace markovmono {

/// A (target, donor) column pair: per-row mass moves from the donor column
/// into the target column, so d p(i, donor) / d p(i, target) = -1.
struct CouplingSpec {
  StateIndex target;
  StateIndex donor;

  /// Throws InvalidArgument if either index is out of range or they coincide.
  void check(const TransitionMatrix& matrix) const;
};

}  // namespace markovmono
