#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace markovmono {

/// Index of a state, 0-based. Checked against a matrix with `checked()`.
struct StateIndex {
  std::size_t value = 0;

  constexpr StateIndex() = default;
  constexpr explicit StateIndex(std::size_t v) : value(v) {}
  constexpr operator std::size_t() const { return value; }
};

/// Row-stochastic n x n matrix, n >= 2. Row i holds the transition law out of
/// state i. Only obtainable through `validate` (or library operations that
/// preserve stochasticity), so every instance satisfies the invariants.
class TransitionMatrix {
 public:
  std::size_t size() const { return static_cast<std::size_t>(p_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return p_(i, j); }
  const Eigen::MatrixXd& entries() const { return p_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Throws InvalidArgument unless s < size().
  StateIndex checked(StateIndex s) const;

  /// Nested-vector copy of the entries, row-major.
  std::vector<std::vector<double>> rows() const;

  friend bool operator==(const TransitionMatrix& a, const TransitionMatrix& b) {
    return a.p_ == b.p_ && a.labels_ == b.labels_;
  }

 private:
  TransitionMatrix(Eigen::MatrixXd p, std::vector<std::string> labels)
      : p_(std::move(p)), labels_(std::move(labels)) {}

  friend TransitionMatrix validate(const Eigen::MatrixXd&, double, std::vector<std::string>);
  friend TransitionMatrix shift_mass(const TransitionMatrix&, std::size_t, std::size_t,
                                     std::size_t, double);

  Eigen::MatrixXd p_;
  std::vector<std::string> labels_;
};

inline constexpr double kDefaultRowTolerance = 1e-9;

/// Checks a candidate matrix and returns it with every row rescaled to sum to
/// one. Entries in [-tolerance, 0) are clamped to zero first.
///
/// Throws TooSmall, NotSquare, NegativeEntry(i, j), RowSumViolation(i, sum),
/// or InvalidArgument (non-finite entry, label count != n).
TransitionMatrix validate(const Eigen::MatrixXd& raw, double tolerance = kDefaultRowTolerance,
                          std::vector<std::string> labels = {});

TransitionMatrix validate(const std::vector<std::vector<double>>& raw,
                          double tolerance = kDefaultRowTolerance,
                          std::vector<std::string> labels = {});

/// Braced literal rows, e.g. validate({{0.5, 0.5}, {0.25, 0.75}}).
TransitionMatrix validate(std::initializer_list<std::initializer_list<double>> raw,
                          double tolerance = kDefaultRowTolerance,
                          std::vector<std::string> labels = {});

/// Moves `amount` of probability from (row, from) to (row, to). Negative
/// amounts move mass the other way. Every other entry is bit-identical to the
/// input. Throws InfeasibleAmount if either entry would leave [0, 1] by more
/// than 1e-15 (dust is clamped).
TransitionMatrix shift_mass(const TransitionMatrix& matrix, std::size_t row, std::size_t from,
                            std::size_t to, double amount);

struct StructureReport {
  bool irreducible = false;
  bool aperiodic = false;
  /// Meaningful only when irreducible; 0 otherwise.
  std::size_t period = 0;
  /// Strongly connected components of the positive-entry digraph. Each class
  /// is sorted; classes are ordered by their smallest state.
  std::vector<std::vector<std::size_t>> communicating_classes;
};

StructureReport structure(const TransitionMatrix& matrix);

/// Throws NotIrreducible unless the chain is irreducible. Periodic chains pass.
void require_ergodic(const TransitionMatrix& matrix);

}  // namespace markovmono
