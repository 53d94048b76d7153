#include "markovmono/hitting.hpp"

#include "markovmono/errors.hpp"

#include <cmath>

namespace markovmono {

namespace {

constexpr double kRefineThreshold = 1e-10;
constexpr double kMinReciprocalCondition = 1e-15;

}  // namespace

TabooSystem::TabooSystem(const TransitionMatrix& matrix, StateIndex target)
    : target_(matrix.checked(target)) {
  require_ergodic(matrix);
  const auto n = static_cast<Eigen::Index>(matrix.size());
  const auto t = static_cast<Eigen::Index>(target_.value);
  const Eigen::MatrixXd& p = matrix.entries();

  q_.resize(n - 1, n - 1);
  exit_row_.resize(n - 1);
  for (Eigen::Index i = 0, ri = 0; i < n; ++i) {
    if (i == t) continue;
    for (Eigen::Index j = 0, rj = 0; j < n; ++j) {
      if (j == t) continue;
      q_(ri, rj++) = p(i, j);
    }
    exit_row_(ri) = p(t, i);
    ++ri;
  }

  a_ = Eigen::MatrixXd::Identity(n - 1, n - 1) - q_;
  lu_.compute(a_);
  lu_transpose_.compute(a_.transpose());
  const double rcond = lu_.rcond();
  if (!std::isfinite(rcond) || rcond < kMinReciprocalCondition) {
    throw SingularSystem("taboo system I - Q is numerically singular (rcond = " +
                         std::to_string(rcond) + ")");
  }
}

Eigen::VectorXd TabooSystem::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = lu_.solve(rhs);
  if (!x.allFinite()) throw SingularSystem("taboo system produced a non-finite solution");
  if (residual(x, rhs) > kRefineThreshold) {
    const Eigen::VectorXd r = rhs - a_ * x;
    x += lu_.solve(r);
  }
  return x;
}

Eigen::VectorXd TabooSystem::solve_transpose(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = lu_transpose_.solve(rhs);
  if (!x.allFinite()) throw SingularSystem("taboo system produced a non-finite solution");
  const Eigen::VectorXd r = rhs - a_.transpose() * x;
  if (r.lpNorm<Eigen::Infinity>() > kRefineThreshold) x += lu_transpose_.solve(r);
  return x;
}

double TabooSystem::residual(const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) const {
  return (a_ * x - rhs).lpNorm<Eigen::Infinity>();
}

std::size_t TabooSystem::reduced(std::size_t full_index) const {
  if (full_index == target_.value) throw InvalidArgument("target has no reduced coordinate");
  return full_index < target_.value ? full_index : full_index - 1;
}

Eigen::VectorXd TabooSystem::expand(const Eigen::VectorXd& reduced_vec, double target_value) const {
  const auto n = static_cast<Eigen::Index>(full_size());
  const auto t = static_cast<Eigen::Index>(target_.value);
  Eigen::VectorXd full(n);
  full.head(t) = reduced_vec.head(t);
  full(t) = target_value;
  full.tail(n - t - 1) = reduced_vec.tail(n - t - 1);
  return full;
}

Eigen::VectorXd TabooSystem::reduce(const Eigen::VectorXd& full_vec) const {
  const auto n = static_cast<Eigen::Index>(full_size());
  const auto t = static_cast<Eigen::Index>(target_.value);
  Eigen::VectorXd out(n - 1);
  out.head(t) = full_vec.head(t);
  out.tail(n - t - 1) = full_vec.tail(n - t - 1);
  return out;
}

HittingProfile expected_hitting_times(const TransitionMatrix& matrix, StateIndex s0) {
  const TabooSystem system(matrix, s0);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(matrix.size()) - 1);
  const Eigen::VectorXd m = system.solve(ones);

  HittingProfile profile;
  profile.target = system.target();
  profile.hit = system.expand(m, 0.0);
  profile.return_time = 1.0 + system.exit_row().dot(m);
  return profile;
}

double hitting_residual(const TransitionMatrix& matrix, const HittingProfile& profile) {
  const std::size_t n = matrix.size();
  const std::size_t t = profile.target.value;
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == t) continue;
    double rhs = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != t) rhs += matrix(j, k) * profile.hit(static_cast<Eigen::Index>(k));
    }
    worst = std::max(worst, std::abs(profile.hit(static_cast<Eigen::Index>(j)) - rhs));
  }
  return worst;
}

double expected_return_time(const TransitionMatrix& matrix, StateIndex s0) {
  return expected_hitting_times(matrix, s0).return_time;
}

}  // namespace markovmono
