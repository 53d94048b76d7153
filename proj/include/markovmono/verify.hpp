#pragma once

#include "markovmono/chain.hpp"
#include "markovmono/perturbation.hpp"
#include "markovmono/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace markovmono {

struct TrialConfig {
  std::size_t trials = 1000;
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  /// Floor on generated entries; must lie in (0, 1/n_max).
  double min_entry = 0.01;
  std::uint64_t seed = 42;
  /// Required margin in pi'(s0) > pi(s0) + margin.
  double strictness_tolerance = 1e-12;
  double fd_step = 1e-6;
  /// 0 picks hardware_concurrency(). The report does not depend on it.
  unsigned threads = 1;

  /// Throws InvalidArgument.
  void check() const;
};

/// Everything needed to regenerate a trial: run_trial(config, trial) with the
/// same config replays it exactly. n, s0 and donor are informational.
struct TrialDescriptor {
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::size_t n = 0;
  std::size_t s0 = 0;
  std::size_t donor = 0;
};

struct TrialFailure {
  TrialDescriptor trial;
  std::string property;
  std::vector<std::pair<std::string, double>> observed;
  std::string message;
};

struct TrialOutcome {
  TrialDescriptor descriptor;
  std::vector<TrialFailure> failures;
  /// pi'(s0) - pi(s0) for the main elementary move, when it was computed.
  std::optional<double> gap;
};

struct VerificationReport {
  std::size_t trials_run = 0;
  std::vector<TrialFailure> failures;
  bool pass = false;
  /// Smallest pi'(s0) - pi(s0) over strict trials; empty if none ran.
  std::optional<double> min_gap;
};

inline constexpr double kPerturbationHeadroom = 0.9;

/// Rows are positive random weights, normalized, then mixed with the uniform
/// row so every entry is >= min_entry. Throws InfeasibleFloor unless
/// n >= 2 and 0 < min_entry < 1/n.
TransitionMatrix random_ergodic_chain(std::size_t n, double min_entry, Rng& rng);

/// Donor drawn uniformly from the columns != s0 that carry mass; each c_i
/// uniform in [0, 0.9 p(i, donor)], redrawn until some c_i > 1e-12.
ElementaryPerturbation random_feasible_perturbation(const TransitionMatrix& matrix, StateIndex s0,
                                                    Rng& rng);

TrialOutcome run_trial(const TrialConfig& config, std::size_t trial);

VerificationReport run_suite(const TrialConfig& config);

// Property names used in TrialFailure::property.
namespace property {
inline constexpr const char* kMonotonicity = "stationary_monotonicity";
inline constexpr const char* kConditions = "theorem_conditions";
inline constexpr const char* kReturnTimeIdentity = "return_time_identity";
inline constexpr const char* kSensitivitySign = "sensitivity_negative";
inline constexpr const char* kTargetRowExact = "target_row_exact";
inline constexpr const char* kFiniteDifference = "finite_difference";
inline constexpr const char* kDecompositionRoundTrip = "decomposition_roundtrip";
inline constexpr const char* kDecompositionGap = "decomposition_gap";
inline constexpr const char* kDecompositionStep = "decomposition_step";
inline constexpr const char* kException = "exception";
}  // namespace property

}  // namespace markovmono
