#include "markovmono/perturbation.hpp"

#include "markovmono/errors.hpp"

#include <algorithm>
#include <cmath>

namespace markovmono {

bool ElementaryPerturbation::strict(double tolerance) const {
  return c.size() > 0 && c.maxCoeff() > tolerance;
}

TransitionMatrix apply_elementary(const TransitionMatrix& matrix,
                                  const ElementaryPerturbation& pert) {
  pert.spec.check(matrix);
  const std::size_t n = matrix.size();
  if (static_cast<std::size_t>(pert.c.size()) != n) {
    throw DimensionMismatch(n, static_cast<std::size_t>(pert.c.size()));
  }
  const std::size_t donor = pert.spec.donor;
  for (std::size_t i = 0; i < n; ++i) {
    const double ci = pert.c(static_cast<Eigen::Index>(i));
    if (!std::isfinite(ci) || ci < 0.0 || ci > matrix(i, donor) + kConditionSlack) {
      throw InfeasibleAmount(i, ci, matrix(i, donor));
    }
  }

  TransitionMatrix out = matrix;
  for (std::size_t i = 0; i < n; ++i) {
    const double ci = pert.c(static_cast<Eigen::Index>(i));
    if (ci > 0.0) out = shift_mass(out, i, donor, pert.spec.target, ci);
  }
  return out;
}

TheoremConditionReport check_theorem_conditions(const TransitionMatrix& p,
                                                const TransitionMatrix& p_prime, StateIndex s0) {
  if (p.size() != p_prime.size()) throw DimensionMismatch(p.size(), p_prime.size());
  const std::size_t n = p.size();
  const std::size_t t = p.checked(s0).value;

  TheoremConditionReport report;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double before = p(i, j);
      const double after = p_prime(i, j);
      const bool ok = j == t ? after >= before - kConditionSlack : after <= before + kConditionSlack;
      if (!ok) report.violations.push_back({i, j, before, after});
    }
    if (p_prime(i, t) > p(i, t) + kStrictnessSlack) report.strict_rows.push_back(i);
  }
  report.holds = report.violations.empty();
  report.strict = !report.strict_rows.empty();
  return report;
}

std::vector<ElementaryPerturbation> decompose(const TransitionMatrix& p,
                                              const TransitionMatrix& p_prime, StateIndex s0) {
  const auto report = check_theorem_conditions(p, p_prime, s0);
  if (!report.holds) {
    const auto& v = report.violations.front();
    throw ConditionsViolated("pair violates the monotone-column conditions at (" +
                             std::to_string(v.row) + ", " + std::to_string(v.column) + ")");
  }

  const std::size_t n = p.size();
  std::vector<ElementaryPerturbation> moves;
  for (std::size_t d = 0; d < n; ++d) {
    if (d == s0.value) continue;
    Eigen::VectorXd c(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      c(static_cast<Eigen::Index>(i)) = std::max(p(i, d) - p_prime(i, d), 0.0);
    }
    if (c.maxCoeff() > 0.0) moves.push_back({CouplingSpec{s0, StateIndex{d}}, std::move(c)});
  }
  return moves;
}

TransitionMatrix compose(const TransitionMatrix& p,
                         const std::vector<ElementaryPerturbation>& moves) {
  TransitionMatrix out = p;
  for (const auto& move : moves) out = apply_elementary(out, move);
  return out;
}

double max_entry_difference(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

}  // namespace markovmono
