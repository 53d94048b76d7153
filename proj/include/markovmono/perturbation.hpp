#pragma once

#include "markovmono/chain.hpp"
#include "markovmono/coupling.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace markovmono {

/// Row-wise mass move: p(i, target) += c_i, p(i, donor) -= c_i.
struct ElementaryPerturbation {
  CouplingSpec spec;
  Eigen::VectorXd c;

  /// At least one amount above `tolerance`.
  bool strict(double tolerance = 1e-12) const;
};

/// Throws InfeasibleAmount(i) if c_i < 0 or c_i > p(i, donor) + 1e-15, and
/// InvalidArgument / DimensionMismatch on malformed input. Entries outside the
/// two coupled columns are copied bit-for-bit.
TransitionMatrix apply_elementary(const TransitionMatrix& matrix,
                                  const ElementaryPerturbation& pert);

struct ConditionViolation {
  std::size_t row;
  std::size_t column;
  double p_value;
  double p_prime_value;
};

struct TheoremConditionReport {
  /// Column s0 weakly up and every other column weakly down, in every row.
  bool holds = false;
  /// Some row raises column s0 by more than 1e-12.
  bool strict = false;
  std::vector<ConditionViolation> violations;
  std::vector<std::size_t> strict_rows;
};

inline constexpr double kConditionSlack = 1e-15;
inline constexpr double kStrictnessSlack = 1e-12;

/// Throws DimensionMismatch if the chains differ in size.
TheoremConditionReport check_theorem_conditions(const TransitionMatrix& p,
                                                const TransitionMatrix& p_prime, StateIndex s0);

/// Splits a compliant pair into one elementary move per donor column with a
/// nonzero deficit, ascending by donor. Throws ConditionsViolated if the pair
/// does not satisfy check_theorem_conditions.
std::vector<ElementaryPerturbation> decompose(const TransitionMatrix& p,
                                              const TransitionMatrix& p_prime, StateIndex s0);

/// Left fold of apply_elementary over `moves`.
TransitionMatrix compose(const TransitionMatrix& p, const std::vector<ElementaryPerturbation>& moves);

/// max_{i,j} |a(i,j) - b(i,j)|; throws DimensionMismatch.
double max_entry_difference(const TransitionMatrix& a, const TransitionMatrix& b);

}  // namespace markovmono
