#include "markovmono/montecarlo.hpp"

#include "markovmono/errors.hpp"
#include "markovmono/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

namespace markovmono {

namespace {

__extension__ typedef unsigned __int128 u128;

// Inverse-CDF sampler over precomputed cumulative rows.
class RowSampler {
 public:
  explicit RowSampler(const TransitionMatrix& matrix) : n_(matrix.size()), cdf_(n_ * n_) {
    last_positive_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        acc += matrix(i, j);
        cdf_[i * n_ + j] = acc;
        if (matrix(i, j) > 0.0) last_positive_[i] = j;
      }
    }
  }

  std::size_t next(std::size_t state, Rng& rng) const {
    const double u = uniform01(rng);
    const double* row = &cdf_[state * n_];
    for (std::size_t j = 0; j < n_; ++j) {
      if (u < row[j]) return j;
    }
    // u landed in the rounding gap between the final cumulative sum and 1.
    return last_positive_[state];
  }

 private:
  std::size_t n_;
  std::vector<double> cdf_;
  std::vector<std::size_t> last_positive_;
};

struct Moments {
  u128 sum = 0;
  u128 sum_sq = 0;
};

// Runs trajectories [0, count) split over worker threads. Each trajectory
// reports its step count; moments are accumulated in exact integer arithmetic
// so the totals are independent of how the work was split.
template <typename Trajectory>
Moments run_trajectories(std::uint64_t count, unsigned threads, Trajectory&& trajectory) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));

  std::vector<Moments> partial(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = count * w / threads;
    const std::uint64_t end = count * (w + 1) / threads;
    try {
      for (std::uint64_t k = begin; k < end; ++k) {
        const std::uint64_t steps = trajectory(k);
        partial[w].sum += steps;
        partial[w].sum_sq += static_cast<u128>(steps) * steps;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Moments total;
  for (const auto& m : partial) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  return total;
}

SimulationEstimate summarize(const Moments& m, std::uint64_t samples, std::uint64_t seed) {
  SimulationEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.mean = static_cast<double>(m.sum) / static_cast<double>(samples);
  if (samples > 1) {
    // N * sum_sq - sum^2 is exact and non-negative.
    const u128 scaled = m.sum_sq * samples - m.sum * m.sum;
    const long double var = static_cast<long double>(scaled) /
                            (static_cast<long double>(samples) * (samples - 1));
    est.std_error = static_cast<double>(std::sqrt(var / samples));
  }
  return est;
}

void check_trajectories(std::uint64_t trajectories) {
  if (trajectories == 0) throw InvalidArgument("need at least one trajectory");
}

std::uint64_t steps_until(const RowSampler& sampler, std::size_t start, std::size_t target,
                          Rng& rng, std::uint64_t cap) {
  std::size_t state = start;
  for (std::uint64_t t = 1; t <= cap; ++t) {
    state = sampler.next(state, rng);
    if (state == target) return t;
  }
  throw CapExceeded(cap);
}

}  // namespace

SimulationEstimate simulate_return_time(const TransitionMatrix& matrix, StateIndex s0,
                                        std::uint64_t trajectories, std::uint64_t seed,
                                        const SimulationOptions& options) {
  check_trajectories(trajectories);
  const std::size_t target = matrix.checked(s0).value;
  require_ergodic(matrix);

  const RowSampler sampler(matrix);
  const auto moments = run_trajectories(trajectories, options.threads, [&](std::uint64_t k) {
    Rng rng = make_substream(seed, k);
    return steps_until(sampler, target, target, rng, options.step_cap);
  });
  return summarize(moments, trajectories, seed);
}

SimulationEstimate simulate_hitting_time(const TransitionMatrix& matrix, StateIndex from,
                                         StateIndex s0, std::uint64_t trajectories,
                                         std::uint64_t seed, const SimulationOptions& options) {
  check_trajectories(trajectories);
  const std::size_t start = matrix.checked(from).value;
  const std::size_t target = matrix.checked(s0).value;
  if (start == target) throw SameState(target);
  require_ergodic(matrix);

  const RowSampler sampler(matrix);
  const auto moments = run_trajectories(trajectories, options.threads, [&](std::uint64_t k) {
    Rng rng = make_substream(seed, k);
    return steps_until(sampler, start, target, rng, options.step_cap);
  });
  return summarize(moments, trajectories, seed);
}

Eigen::VectorXd simulate_occupancy(const TransitionMatrix& matrix, StateIndex start,
                                   std::uint64_t steps, std::uint64_t seed) {
  if (steps == 0) throw InvalidArgument("need at least one step");
  std::size_t state = matrix.checked(start).value;

  const RowSampler sampler(matrix);
  Rng rng = make_substream(seed, 0);
  std::vector<std::uint64_t> visits(matrix.size(), 0);
  for (std::uint64_t t = 0; t < steps; ++t) {
    state = sampler.next(state, rng);
    ++visits[state];
  }
  Eigen::VectorXd freq(static_cast<Eigen::Index>(matrix.size()));
  for (std::size_t j = 0; j < matrix.size(); ++j) {
    freq(static_cast<Eigen::Index>(j)) =
        static_cast<double>(visits[j]) / static_cast<double>(steps);
  }
  return freq;
}

}  // namespace markovmono
