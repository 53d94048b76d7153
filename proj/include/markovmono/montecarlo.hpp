#pragma once

#include "markovmono/chain.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace markovmono {

struct SimulationEstimate {
  double mean = 0.0;
  /// Sample standard deviation / sqrt(samples); 0 for a single sample.
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kTrajectoryStepCap = 10'000'000;

struct SimulationOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency(). Results do
  /// not depend on this value.
  unsigned threads = 1;
  std::uint64_t step_cap = kTrajectoryStepCap;
};

/// Mean of the first t >= 1 with X_t = s0, given X_0 = s0. Trajectory k uses
/// its own generator seeded from (seed, k). Throws NotIrreducible,
/// InvalidArgument (trajectories == 0), CapExceeded.
SimulationEstimate simulate_return_time(const TransitionMatrix& matrix, StateIndex s0,
                                        std::uint64_t trajectories, std::uint64_t seed,
                                        const SimulationOptions& options = {});

/// Mean of the first t >= 1 with X_t = s0, given X_0 = from != s0.
/// Throws SameState in addition to the above.
SimulationEstimate simulate_hitting_time(const TransitionMatrix& matrix, StateIndex from,
                                         StateIndex s0, std::uint64_t trajectories,
                                         std::uint64_t seed, const SimulationOptions& options = {});

/// Fraction of time spent in each state over `steps` transitions of a single
/// path started at `start`.
Eigen::VectorXd simulate_occupancy(const TransitionMatrix& matrix, StateIndex start,
                                   std::uint64_t steps, std::uint64_t seed);

}  // namespace markovmono
