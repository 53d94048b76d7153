#include "markovmono/sensitivity.hpp"

#include "markovmono/errors.hpp"
#include "markovmono/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace markovmono {

void CouplingSpec::check(const TransitionMatrix& matrix) const {
  matrix.checked(target);
  matrix.checked(donor);
  if (target.value == donor.value) {
    throw InvalidArgument("target and donor must differ (both are " +
                          std::to_string(target.value) + ")");
  }
}

namespace {

// Shared by both forms: given occupation weights w_j = (r N)_j (or a truncation
// of them), assemble the full derivative vector.
SensitivityVector assemble(const TabooSystem& system, const CouplingSpec& spec, double donor_hit,
                           const Eigen::VectorXd& weights) {
  SensitivityVector out{spec, system.expand(-donor_hit * weights, -donor_hit)};
  return out;
}

}  // namespace

SensitivityVector coupled_derivative_direct(const TransitionMatrix& matrix,
                                            const CouplingSpec& spec) {
  spec.check(matrix);
  const TabooSystem system(matrix, spec.target);
  const auto k = static_cast<Eigen::Index>(matrix.size()) - 1;

  const Eigen::VectorXd m = system.solve(Eigen::VectorXd::Ones(k));
  const double donor_hit = m(static_cast<Eigen::Index>(system.reduced(spec.donor)));

  // w = r (I - Q)^{-1}  <=>  (I - Q)^T w^T = r^T
  const Eigen::VectorXd w = system.solve_transpose(system.exit_row().transpose());
  return assemble(system, spec, donor_hit, w);
}

SensitivityVector coupled_derivative_series(const TransitionMatrix& matrix,
                                            const CouplingSpec& spec, std::size_t terms) {
  if (terms == 0) throw InvalidArgument("series needs at least one term");
  spec.check(matrix);
  const TabooSystem system(matrix, spec.target);
  const auto k = static_cast<Eigen::Index>(matrix.size()) - 1;

  const Eigen::VectorXd m = system.solve(Eigen::VectorXd::Ones(k));
  const double donor_hit = m(static_cast<Eigen::Index>(system.reduced(spec.donor)));

  // sum_{t < terms} r Q^t, accumulated one step forward at a time.
  Eigen::RowVectorXd step = system.exit_row();
  Eigen::RowVectorXd total = step;
  for (std::size_t t = 1; t < terms; ++t) {
    step = step * system.taboo_block();
    total += step;
  }
  return assemble(system, spec, donor_hit, total.transpose());
}

bool finite_difference_feasible(const TransitionMatrix& matrix, const CouplingSpec& spec,
                                StateIndex row, double h) {
  const std::size_t r = matrix.checked(row).value;
  return matrix(r, spec.donor) >= h && matrix(r, spec.target) >= h;
}

double finite_difference_check(const TransitionMatrix& matrix, const CouplingSpec& spec,
                               StateIndex row, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  spec.check(matrix);
  const std::size_t r = matrix.checked(row).value;
  if (matrix(r, spec.donor) < h) throw InfeasibleStep(r, spec.donor, matrix(r, spec.donor), h);
  if (matrix(r, spec.target) < h) throw InfeasibleStep(r, spec.target, matrix(r, spec.target), h);

  const TransitionMatrix plus = shift_mass(matrix, r, spec.donor, spec.target, h);
  const TransitionMatrix minus = shift_mass(matrix, r, spec.donor, spec.target, -h);
  return (expected_return_time(plus, spec.target) - expected_return_time(minus, spec.target)) /
         (2.0 * h);
}

double finite_difference_tolerance(double analytic) {
  return std::max(1e-4, 1e-3 * std::abs(analytic));
}

Eigen::VectorXd stationary_derivative(const SensitivityVector& sensitivity, double return_time) {
  return -sensitivity.d_mu / (return_time * return_time);
}

}  // namespace markovmono
