#pragma once

#include "markovmono/chain.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace markovmono {

/// Probability vector over the states of a chain.
struct Distribution {
  Eigen::VectorXd probs;

  std::size_t size() const { return static_cast<std::size_t>(probs.size()); }
  double operator[](std::size_t i) const { return probs(static_cast<Eigen::Index>(i)); }
};

/// max_j |sum_i pi_i p(i,j) - pi_j|
double stationarity_residual(const TransitionMatrix& matrix, const Distribution& pi);

/// Solves pi P = pi with one balance equation replaced by sum(pi) = 1, using
/// LU with partial pivoting. Throws NotIrreducible or SingularSystem.
Distribution stationary_linear(const TransitionMatrix& matrix);

inline constexpr std::size_t kDefaultPowerIterations = 1'000'000;

/// x <- xP from the uniform vector until the L1 change is <= tol.
/// Needs an irreducible aperiodic chain: throws NotIrreducible, NotAperiodic,
/// or NoConvergence(max_iters).
Distribution stationary_power(const TransitionMatrix& matrix, double tol = 1e-12,
                              std::size_t max_iters = kDefaultPowerIterations);

/// pi(s0) computed as the reciprocal of the expected first return time to s0.
double stationary_via_return_time(const TransitionMatrix& matrix, StateIndex s0);

}  // namespace markovmono
