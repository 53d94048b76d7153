#include "markovmono/verify.hpp"

#include "markovmono/errors.hpp"
#include "markovmono/hitting.hpp"
#include "markovmono/sensitivity.hpp"
#include "markovmono/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace markovmono {

namespace {

constexpr double kReturnIdentityTol = 1e-8;
constexpr double kTargetRowTol = 1e-13;
constexpr double kRoundTripTol = 1e-14;
constexpr int kMaxRedraws = 100;

class TrialRecorder {
 public:
  explicit TrialRecorder(TrialOutcome& outcome) : outcome_(outcome) {}

  void fail(const char* property, std::vector<std::pair<std::string, double>> observed,
            std::string message = {}) {
    outcome_.failures.push_back(
        {outcome_.descriptor, property, std::move(observed), std::move(message)});
  }

 private:
  TrialOutcome& outcome_;
};

void check_return_identity(TrialRecorder& rec, const TransitionMatrix& m, StateIndex s0,
                           const char* which) {
  const double pi = stationary_linear(m)[s0];
  const double mu = expected_return_time(m, s0);
  const double err = std::abs(pi * mu - 1.0);
  if (!(err <= kReturnIdentityTol)) {
    rec.fail(property::kReturnTimeIdentity, {{"pi", pi}, {"mu", mu}, {"error", err}}, which);
  }
}

void check_sensitivity(TrialRecorder& rec, const TransitionMatrix& m, const CouplingSpec& spec,
                       const TrialConfig& config, Rng& rng) {
  const auto sens = coupled_derivative_direct(m, spec);
  const auto profile = expected_hitting_times(m, spec.target);
  for (Eigen::Index i = 0; i < sens.d_mu.size(); ++i) {
    if (!(sens.d_mu(i) < 0.0)) {
      rec.fail(property::kSensitivitySign, {{"row", static_cast<double>(i)}, {"d_mu", sens.d_mu(i)}});
    }
  }

  const auto t = static_cast<Eigen::Index>(spec.target.value);
  const auto d = static_cast<Eigen::Index>(spec.donor.value);
  const double exactness = std::abs(sens.d_mu(t) + profile.hit(d));
  if (!(exactness <= kTargetRowTol)) {
    rec.fail(property::kTargetRowExact,
             {{"d_mu_target", sens.d_mu(t)}, {"hit_donor", profile.hit(d)}, {"error", exactness}});
  }

  const StateIndex row{uniform_index(rng, m.size())};
  if (finite_difference_feasible(m, spec, row, config.fd_step)) {
    const double fd = finite_difference_check(m, spec, row, config.fd_step);
    const double analytic = sens.d_mu(static_cast<Eigen::Index>(row.value));
    if (!(std::abs(fd - analytic) <= finite_difference_tolerance(analytic))) {
      rec.fail(property::kFiniteDifference,
               {{"row", static_cast<double>(row.value)}, {"analytic", analytic}, {"fd", fd}});
    }
  }
}

// Builds a compliant pair from 1-3 elementary moves, decomposes it again and
// checks the round trip plus the monotone steps.
void check_decomposition(TrialRecorder& rec, const TransitionMatrix& base, StateIndex s0,
                         const TrialConfig& config, Rng& rng) {
  const std::size_t moves = 1 + uniform_index(rng, 3);
  TransitionMatrix target = base;
  for (std::size_t k = 0; k < moves; ++k) {
    target = apply_elementary(target, random_feasible_perturbation(target, s0, rng));
  }

  const auto report = check_theorem_conditions(base, target, s0);
  if (!report.holds) {
    rec.fail(property::kConditions, {{"violations", static_cast<double>(report.violations.size())}},
             "composed moves violate the column conditions");
    return;
  }

  const auto steps = decompose(base, target, s0);
  const double diff = max_entry_difference(compose(base, steps), target);
  if (!(diff <= kRoundTripTol)) {
    rec.fail(property::kDecompositionRoundTrip,
             {{"max_entry_error", diff}, {"steps", static_cast<double>(steps.size())}});
  }

  const bool endpoints_ergodic = structure(base).irreducible && structure(target).irreducible;
  if (report.strict && endpoints_ergodic) {
    const double gap = stationary_linear(target)[s0] - stationary_linear(base)[s0];
    if (!(gap > config.strictness_tolerance)) {
      rec.fail(property::kDecompositionGap, {{"gap", gap}});
    }
  }

  TransitionMatrix before = base;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const TransitionMatrix after = apply_elementary(before, steps[k]);
    if (structure(before).irreducible && structure(after).irreducible &&
        steps[k].strict(kStrictnessSlack)) {
      const double gap = stationary_linear(after)[s0] - stationary_linear(before)[s0];
      if (!(gap > 0.0)) {
        rec.fail(property::kDecompositionStep, {{"step", static_cast<double>(k)}, {"gap", gap}});
      }
    }
    before = after;
  }
}

}  // namespace

void TrialConfig::check() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (n_min < 2 || n_min > n_max) throw InvalidArgument("need 2 <= n_min <= n_max");
  if (!(min_entry > 0.0) || !(min_entry < 1.0 / static_cast<double>(n_max))) {
    throw InvalidArgument("min_entry must lie in (0, 1/n_max)");
  }
  if (!(strictness_tolerance >= 0.0)) throw InvalidArgument("strictness_tolerance must be >= 0");
  if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
}

TransitionMatrix random_ergodic_chain(std::size_t n, double min_entry, Rng& rng) {
  const double nd = static_cast<double>(n);
  if (n < 2 || !(min_entry > 0.0) || !(min_entry < 1.0 / nd)) throw InfeasibleFloor(n, min_entry);

  const double uniform_share = nd * min_entry;
  Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = -std::log1p(-uniform01(rng));
    double total = p.row(i).sum();
    if (total <= 0.0) {
      p.row(i).setOnes();
      total = nd;
    }
    p.row(i) = (uniform_share / nd) + (1.0 - uniform_share) * (p.row(i) / total).array();
  }
  return validate(p);
}

ElementaryPerturbation random_feasible_perturbation(const TransitionMatrix& matrix, StateIndex s0,
                                                    Rng& rng) {
  const std::size_t n = matrix.size();
  const std::size_t target = matrix.checked(s0).value;

  std::vector<std::size_t> donors;
  for (std::size_t d = 0; d < n; ++d) {
    if (d != target && matrix.entries().col(static_cast<Eigen::Index>(d)).maxCoeff() > 0.0) {
      donors.push_back(d);
    }
  }
  if (donors.empty()) throw InvalidArgument("no column other than s0 carries any mass");
  const std::size_t donor = donors[uniform_index(rng, donors.size())];

  ElementaryPerturbation pert{CouplingSpec{s0, StateIndex{donor}},
                              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) {
      pert.c(static_cast<Eigen::Index>(i)) =
          uniform(rng, 0.0, matrix(i, donor) * kPerturbationHeadroom);
    }
    if (pert.strict(kStrictnessSlack)) return pert;
  }

  // Give up drawing: put half the headroom on the first row that has some.
  pert.c.setZero();
  for (std::size_t r = 0; r < n; ++r) {
    const double amount = matrix(r, donor) * kPerturbationHeadroom / 2.0;
    if (amount > kStrictnessSlack) {
      pert.c(static_cast<Eigen::Index>(r)) = amount;
      break;
    }
  }
  return pert;
}

TrialOutcome run_trial(const TrialConfig& config, std::size_t trial) {
  Rng rng = make_substream(config.seed, trial);
  TrialOutcome outcome;
  outcome.descriptor.seed = config.seed;
  outcome.descriptor.trial = trial;
  TrialRecorder rec(outcome);

  try {
    const std::size_t n = config.n_min + uniform_index(rng, config.n_max - config.n_min + 1);
    outcome.descriptor.n = n;
    const TransitionMatrix base = random_ergodic_chain(n, config.min_entry, rng);
    const StateIndex s0{uniform_index(rng, n)};
    outcome.descriptor.s0 = s0.value;
    const auto pert = random_feasible_perturbation(base, s0, rng);
    outcome.descriptor.donor = pert.spec.donor.value;
    const TransitionMatrix perturbed = apply_elementary(base, pert);

    const auto conditions = check_theorem_conditions(base, perturbed, s0);
    if (!conditions.holds || !conditions.strict) {
      rec.fail(property::kConditions,
               {{"holds", conditions.holds ? 1.0 : 0.0}, {"strict", conditions.strict ? 1.0 : 0.0}});
    }

    // Entries stay >= 0.1 * min_entry after the move, so both ends are ergodic.
    const double before = stationary_linear(base)[s0];
    const double after = stationary_linear(perturbed)[s0];
    outcome.gap = after - before;
    if (!(after > before + config.strictness_tolerance)) {
      rec.fail(property::kMonotonicity,
               {{"pi", before}, {"pi_prime", after}, {"gap", after - before}});
    }

    check_return_identity(rec, base, s0, "base chain");
    check_return_identity(rec, perturbed, s0, "perturbed chain");
    check_sensitivity(rec, base, pert.spec, config, rng);
    check_decomposition(rec, base, s0, config, rng);
  } catch (const std::exception& e) {
    rec.fail(property::kException, {}, e.what());
  }
  return outcome;
}

VerificationReport run_suite(const TrialConfig& config) {
  config.check();
  std::vector<TrialOutcome> outcomes(config.trials);

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trials));
  auto work = [&](unsigned w) {
    for (std::size_t k = w; k < config.trials; k += threads) outcomes[k] = run_trial(config, k);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  VerificationReport report;
  report.trials_run = config.trials;
  for (auto& outcome : outcomes) {
    // Every generated move is strict, so every computed gap counts.
    if (outcome.gap) {
      report.min_gap = report.min_gap ? std::min(*report.min_gap, *outcome.gap) : *outcome.gap;
    }
    for (auto& f : outcome.failures) report.failures.push_back(std::move(f));
  }
  report.pass = report.failures.empty();
  return report;
}

}  // namespace markovmono
