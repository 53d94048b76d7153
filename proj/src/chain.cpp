#include "markovmono/chain.hpp"

#include "markovmono/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace markovmono {

namespace {

double naive_row_sum(const Eigen::MatrixXd& p, Eigen::Index i) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < p.cols(); ++j) s += p(i, j);
  return s;
}

// Rescale row i to sum to one and push the last few ulps of residual onto the
// largest entry, so that the naive left-to-right sum is 1.0 whenever possible.
// Rows already within a few ulps are left untouched, which is what makes
// validate idempotent.
void renormalize_row(Eigen::MatrixXd& p, Eigen::Index i) {
  const double n = static_cast<double>(p.cols());
  const double ulp_band = 2.0 * n * std::numeric_limits<double>::epsilon();
  double s = naive_row_sum(p, i);
  if (std::abs(s - 1.0) <= ulp_band) return;

  p.row(i) /= s;
  Eigen::Index largest = 0;
  p.row(i).maxCoeff(&largest);
  for (int pass = 0; pass < 4; ++pass) {
    s = naive_row_sum(p, i);
    if (s == 1.0) break;
    p(i, largest) += 1.0 - s;
  }
}

std::vector<std::vector<bool>> reachability(const Eigen::MatrixXd& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t src = 0; src < n; ++src) {
    std::vector<std::size_t> stack{src};
    reach[src][src] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (p(u, v) > 0.0 && !reach[src][v]) {
          reach[src][v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return reach;
}

// Period of an irreducible chain: BFS levels from state 0, then the gcd of
// level[u] + 1 - level[v] over every positive edge u -> v.
std::size_t bfs_period(const Eigen::MatrixXd& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> level(n, unseen);
  std::queue<std::size_t> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v = 0; v < n; ++v) {
      if (p(u, v) > 0.0 && level[v] == unseen) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
    }
  }
  std::size_t g = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (p(u, v) > 0.0 && level[u] != unseen && level[v] != unseen) {
        const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
        g = std::gcd(g, static_cast<std::size_t>(std::llabs(diff)));
      }
    }
  }
  return g;
}

}  // namespace

StateIndex TransitionMatrix::checked(StateIndex s) const {
  if (s.value >= size()) {
    throw InvalidArgument("state index " + std::to_string(s.value) + " out of range for " +
                          std::to_string(size()) + " states");
  }
  return s;
}

std::vector<std::vector<double>> TransitionMatrix::rows() const {
  std::vector<std::vector<double>> out(size(), std::vector<double>(size()));
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) out[i][j] = p_(i, j);
  return out;
}

TransitionMatrix validate(const Eigen::MatrixXd& raw, double tolerance,
                          std::vector<std::string> labels) {
  if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be non-negative");
  if (raw.rows() != raw.cols()) {
    throw NotSquare(0, static_cast<std::size_t>(raw.cols()), static_cast<std::size_t>(raw.rows()));
  }
  const auto n = static_cast<std::size_t>(raw.rows());
  if (n < 2) throw TooSmall(n);
  if (!labels.empty() && labels.size() != n) {
    throw InvalidArgument("expected " + std::to_string(n) + " labels, got " +
                          std::to_string(labels.size()));
  }

  Eigen::MatrixXd p = raw;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double x = p(i, j);
      if (!std::isfinite(x)) {
        throw InvalidArgument("non-finite entry at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
      if (x < -tolerance) throw NegativeEntry(i, j, x);
    }
    const double sum = naive_row_sum(p, i);
    if (std::abs(sum - 1.0) > tolerance) throw RowSumViolation(i, sum);
    for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = std::max(p(i, j), 0.0);
    renormalize_row(p, i);
  }
  return TransitionMatrix(std::move(p), std::move(labels));
}

TransitionMatrix validate(const std::vector<std::vector<double>>& raw, double tolerance,
                          std::vector<std::string> labels) {
  const std::size_t n = raw.size();
  if (n < 2) throw TooSmall(n);
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i].size() != n) throw NotSquare(i, raw[i].size(), n);
    for (std::size_t j = 0; j < n; ++j) m(i, j) = raw[i][j];
  }
  return validate(m, tolerance, std::move(labels));
}

TransitionMatrix validate(std::initializer_list<std::initializer_list<double>> raw,
                          double tolerance, std::vector<std::string> labels) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : raw) rows.emplace_back(r);
  return validate(rows, tolerance, std::move(labels));
}

TransitionMatrix shift_mass(const TransitionMatrix& matrix, std::size_t row, std::size_t from,
                            std::size_t to, double amount) {
  constexpr double dust = 1e-15;
  const std::size_t n = matrix.size();
  if (row >= n || from >= n || to >= n) throw InvalidArgument("shift_mass: index out of range");
  if (!std::isfinite(amount)) throw InvalidArgument("shift_mass: non-finite amount");
  if (from == to || amount == 0.0) return matrix;

  Eigen::MatrixXd p = matrix.entries();
  // Whichever entry loses mass must have enough of it.
  const std::size_t loser = amount > 0.0 ? from : to;
  const double moved = std::abs(amount);
  if (moved > p(row, loser) + dust) throw InfeasibleAmount(row, moved, p(row, loser));
  p(row, from) = std::max(p(row, from) - amount, 0.0);
  p(row, to) = std::max(p(row, to) + amount, 0.0);
  return TransitionMatrix(std::move(p), matrix.labels());
}

StructureReport structure(const TransitionMatrix& matrix) {
  const Eigen::MatrixXd& p = matrix.entries();
  const std::size_t n = matrix.size();
  const auto reach = reachability(p);

  StructureReport report;
  std::vector<bool> assigned(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t j = i; j < n; ++j) {
      if (reach[i][j] && reach[j][i]) {
        cls.push_back(j);
        assigned[j] = true;
      }
    }
    report.communicating_classes.push_back(std::move(cls));
  }

  report.irreducible = report.communicating_classes.size() == 1;
  if (report.irreducible) {
    report.period = bfs_period(p);
    report.aperiodic = report.period == 1;
  }
  return report;
}

void require_ergodic(const TransitionMatrix& matrix) {
  auto report = structure(matrix);
  if (!report.irreducible) throw NotIrreducible(std::move(report.communicating_classes));
}

}  // namespace markovmono
