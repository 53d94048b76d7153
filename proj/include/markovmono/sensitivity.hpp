#pragma once

#include "markovmono/chain.hpp"
#include "markovmono/coupling.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace markovmono {

/// d_mu[i] = d mu_target / d c_i at c = 0, where c_i moves mass in row i from
/// the donor column to the target column. Units: steps per unit probability.
struct SensitivityVector {
  CouplingSpec spec;
  Eigen::VectorXd d_mu;
};

/// Closed-form derivative of the return time to spec.target.
///
/// With m the hitting times to the target, Q the taboo block and r the target
/// row restricted to non-target columns:
///
///   d_mu[target] = -m[donor]
///   d_mu[j]      = -m[donor] * (r (I - Q)^{-1})_j      for j != target
///
/// (I - Q)^{-1} is applied through a transposed solve, never formed. Every
/// entry is strictly negative on an irreducible chain. The derivative is
/// defined even where p(i, donor) = 0 (as a one-sided derivative).
SensitivityVector coupled_derivative_direct(const TransitionMatrix& matrix,
                                            const CouplingSpec& spec);

/// Same quantity with (I - Q)^{-1} replaced by the truncated Neumann series
/// sum_{t < terms} Q^t, i.e. the forward-substituted hitting-time recursion.
/// terms must be >= 1. The target entry needs no series and is exact for any
/// number of terms.
SensitivityVector coupled_derivative_series(const TransitionMatrix& matrix,
                                            const CouplingSpec& spec, std::size_t terms);

inline constexpr double kDefaultFiniteDifferenceStep = 1e-6;

/// Central difference [mu(c_row = +h) - mu(c_row = -h)] / (2h) of the return
/// time to spec.target, computed on explicitly perturbed matrices.
///
/// Both stencil points must stay on the simplex: throws InfeasibleStep if
/// p(row, donor) < h or p(row, target) < h, NotIrreducible if a stencil chain
/// is reducible.
double finite_difference_check(const TransitionMatrix& matrix, const CouplingSpec& spec,
                               StateIndex row, double h = kDefaultFiniteDifferenceStep);

/// True when both central-difference stencil points for `row` are feasible.
bool finite_difference_feasible(const TransitionMatrix& matrix, const CouplingSpec& spec,
                                StateIndex row, double h = kDefaultFiniteDifferenceStep);

/// Acceptance band for comparing an analytic derivative with its central
/// difference: max(1e-4, 1e-3 |analytic|).
double finite_difference_tolerance(double analytic);

/// d pi(target) / d c_i = -d_mu[i] / mu^2, from pi(target) = 1 / mu.
Eigen::VectorXd stationary_derivative(const SensitivityVector& sensitivity, double return_time);

}  // namespace markovmono
