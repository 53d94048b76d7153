#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace markovmono {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or violated preconditions (zero trials, s0 == donor, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input document (chain or perturbation JSON).
class FormatError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class TooSmall : public Error {
 public:
  explicit TooSmall(std::size_t n);
  std::size_t n;
};

class NotSquare : public Error {
 public:
  NotSquare(std::size_t row, std::size_t length, std::size_t expected);
  std::size_t row;
};

class NegativeEntry : public Error {
 public:
  NegativeEntry(std::size_t i, std::size_t j, double value);
  std::size_t i, j;
  double value;
};

class RowSumViolation : public Error {
 public:
  RowSumViolation(std::size_t i, double sum);
  std::size_t i;
  double sum;
};

class NotIrreducible : public Error {
 public:
  explicit NotIrreducible(std::vector<std::vector<std::size_t>> classes);
  std::vector<std::vector<std::size_t>> classes;
};

class NotAperiodic : public Error {
 public:
  explicit NotAperiodic(std::size_t period);
  std::size_t period;
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(std::size_t iterations);
  std::size_t iterations;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t left, std::size_t right);
};

class InfeasibleAmount : public Error {
 public:
  InfeasibleAmount(std::size_t row, double amount, double available);
  std::size_t row;
};

class InfeasibleStep : public Error {
 public:
  InfeasibleStep(std::size_t row, std::size_t column, double available, double h);
  std::size_t row;
};

class ConditionsViolated : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(std::size_t cap);
};

class SameState : public Error {
 public:
  explicit SameState(std::size_t state);
};

class InfeasibleFloor : public Error {
 public:
  InfeasibleFloor(std::size_t n, double min_entry);
};

}  // namespace markovmono
