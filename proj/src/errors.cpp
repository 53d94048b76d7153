#include "markovmono/errors.hpp"

#include <sstream>
#include <utility>

namespace markovmono {

namespace {

std::string format_classes(const std::vector<std::vector<std::size_t>>& classes) {
  std::ostringstream os;
  os << "chain is not irreducible; communicating classes:";
  for (const auto& c : classes) {
    os << " {";
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
    os << "}";
  }
  return os.str();
}

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

}  // namespace

TooSmall::TooSmall(std::size_t n_)
    : Error(concat("transition matrix needs at least 2 states, got ", n_)), n(n_) {}

NotSquare::NotSquare(std::size_t row_, std::size_t length, std::size_t expected)
    : Error(concat("matrix is not square: row ", row_, " has ", length, " entries, expected ",
                   expected)),
      row(row_) {}

NegativeEntry::NegativeEntry(std::size_t i_, std::size_t j_, double value_)
    : Error(concat("negative entry at (", i_, ", ", j_, "): ", value_)), i(i_), j(j_), value(value_) {}

RowSumViolation::RowSumViolation(std::size_t i_, double sum_)
    : Error(concat("row ", i_, " sums to ", sum_, ", not 1")), i(i_), sum(sum_) {}

NotIrreducible::NotIrreducible(std::vector<std::vector<std::size_t>> classes_)
    : Error(format_classes(classes_)), classes(std::move(classes_)) {}

NotAperiodic::NotAperiodic(std::size_t period_)
    : Error(concat("chain is periodic with period ", period_,
                   "; power iteration needs an aperiodic chain")),
      period(period_) {}

NoConvergence::NoConvergence(std::size_t iterations_)
    : Error(concat("power iteration did not converge in ", iterations_, " iterations")),
      iterations(iterations_) {}

DimensionMismatch::DimensionMismatch(std::size_t left, std::size_t right)
    : Error(concat("dimension mismatch: ", left, " vs ", right, " states")) {}

InfeasibleAmount::InfeasibleAmount(std::size_t row_, double amount, double available)
    : Error(concat("infeasible amount in row ", row_, ": c = ", amount,
                   " but donor entry is ", available)),
      row(row_) {}

InfeasibleStep::InfeasibleStep(std::size_t row_, std::size_t column, double available, double h)
    : Error(concat("finite-difference step h = ", h, " leaves the simplex in row ", row_,
                   ": entry (", row_, ", ", column, ") is ", available)),
      row(row_) {}

CapExceeded::CapExceeded(std::size_t cap)
    : Error(concat("trajectory exceeded ", cap, " steps without reaching the target")) {}

SameState::SameState(std::size_t state)
    : Error(concat("start state equals target state ", state)) {}

InfeasibleFloor::InfeasibleFloor(std::size_t n, double min_entry)
    : Error(concat("entry floor ", min_entry, " is infeasible for ", n,
                   " states; need 0 < min_entry < 1/n")) {}

}  // namespace markovmono
