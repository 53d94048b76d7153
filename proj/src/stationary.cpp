#include "markovmono/stationary.hpp"

#include "markovmono/errors.hpp"
#include "markovmono/hitting.hpp"

#include <cmath>

namespace markovmono {

double stationarity_residual(const TransitionMatrix& matrix, const Distribution& pi) {
  const Eigen::RowVectorXd row = pi.probs.transpose();
  return (row * matrix.entries() - row).lpNorm<Eigen::Infinity>();
}

Distribution stationary_linear(const TransitionMatrix& matrix) {
  require_ergodic(matrix);
  const auto n = static_cast<Eigen::Index>(matrix.size());

  // (P^T - I) pi = 0 with the last balance equation swapped for sum(pi) = 1.
  Eigen::MatrixXd a = matrix.entries().transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  if (!std::isfinite(rcond) || rcond < 1e-15) {
    throw SingularSystem("stationary system is numerically singular");
  }
  Eigen::VectorXd pi = lu.solve(b);
  if (!pi.allFinite()) throw SingularSystem("stationary system produced a non-finite solution");

  pi /= pi.sum();
  return Distribution{std::move(pi)};
}

Distribution stationary_power(const TransitionMatrix& matrix, double tol, std::size_t max_iters) {
  if (!(tol > 0.0)) throw InvalidArgument("power iteration tolerance must be positive");
  auto report = structure(matrix);
  if (!report.irreducible) throw NotIrreducible(std::move(report.communicating_classes));
  if (!report.aperiodic) throw NotAperiodic(report.period);

  const auto n = static_cast<Eigen::Index>(matrix.size());
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 1; it <= max_iters; ++it) {
    Eigen::RowVectorXd next = x * matrix.entries();
    next /= next.sum();
    const double change = (next - x).lpNorm<1>();
    x = std::move(next);
    if (change <= tol) return Distribution{x.transpose()};
  }
  throw NoConvergence(max_iters);
}

double stationary_via_return_time(const TransitionMatrix& matrix, StateIndex s0) {
  return 1.0 / expected_return_time(matrix, s0);
}

}  // namespace markovmono
