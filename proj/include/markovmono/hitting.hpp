#pragma once

#include "markovmono/chain.hpp"

#include <Eigen/Dense>

#include <vector>

namespace markovmono {

/// Expected first hitting times to a fixed target state.
///
/// hit[j] is the mean number of steps to reach `target` from j (j != target),
/// and hit[target] = 0. The mean first return time to the target is kept in
/// `return_time`; the two obey
///
///   hit[j]      = 1 + sum_{k != target} p(j, k) hit[k]   (j != target)
///   return_time = 1 + sum_{k != target} p(target, k) hit[k]
struct HittingProfile {
  StateIndex target;
  Eigen::VectorXd hit;
  double return_time = 0.0;
};

/// The taboo system I - Q, where Q is P with row and column `target` deleted,
/// factored once. Reduced coordinates skip the target index; `expand` and
/// `reduce` convert between full and reduced vectors.
class TabooSystem {
 public:
  /// Throws NotIrreducible or SingularSystem.
  TabooSystem(const TransitionMatrix& matrix, StateIndex target);

  StateIndex target() const { return target_; }
  std::size_t full_size() const { return static_cast<std::size_t>(q_.rows()) + 1; }

  /// Reduced sub-stochastic block Q.
  const Eigen::MatrixXd& taboo_block() const { return q_; }

  /// Row `target` of P restricted to the non-target columns.
  const Eigen::RowVectorXd& exit_row() const { return exit_row_; }

  /// Solves (I - Q) x = rhs, with one refinement pass if the residual
  /// exceeds 1e-10.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// Solves (I - Q)^T x = rhs.
  Eigen::VectorXd solve_transpose(const Eigen::VectorXd& rhs) const;

  /// ||(I - Q) x - rhs||_inf
  double residual(const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) const;

  std::size_t reduced(std::size_t full_index) const;
  Eigen::VectorXd expand(const Eigen::VectorXd& reduced_vec, double target_value = 0.0) const;
  Eigen::VectorXd reduce(const Eigen::VectorXd& full_vec) const;

 private:
  StateIndex target_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd a_;  // I - Q
  Eigen::RowVectorXd exit_row_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_transpose_;
};

HittingProfile expected_hitting_times(const TransitionMatrix& matrix, StateIndex s0);

/// Per-row residual of the hitting-time balance equations, max over j != s0.
double hitting_residual(const TransitionMatrix& matrix, const HittingProfile& profile);

double expected_return_time(const TransitionMatrix& matrix, StateIndex s0);

}  // namespace markovmono
