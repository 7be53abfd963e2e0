#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpn {

/// Cholesky pivot fell at or below the pivot floor; the matrix is not
/// positive definite in working precision.
class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(int pivot_index, double pivot, double floor)
      : std::runtime_error("matrix not positive definite: pivot " +
                           std::to_string(pivot_index) + " = " +
                           std::to_string(pivot) + " <= floor " +
                           std::to_string(floor)),
        pivot_index_(pivot_index) {}

  int pivot_index() const { return pivot_index_; }

 private:
  int pivot_index_;
};

/// Two input locations coincide (deterministic models produce identical
/// outputs at replicated points, so duplicates carry no information).
class DuplicatePoints : public std::runtime_error {
 public:
  explicit DuplicatePoints(int index)
      : std::runtime_error("duplicate input points at index " +
                           std::to_string(index)),
        index_(index) {}

  int index() const { return index_; }

 private:
  int index_;
};

/// Input locations are not strictly increasing.
class UnsortedPoints : public std::runtime_error {
 public:
  UnsortedPoints() : std::runtime_error("input points are not strictly increasing") {}
};

/// Constant outputs: the ML variance estimate is zero and the profile
/// log-likelihood is undefined.
class DegenerateData : public std::runtime_error {
 public:
  DegenerateData() : std::runtime_error("degenerate data: constant outputs") {}
};

/// No point of the search grid admits a usable factorization.
class AllInfeasible : public std::runtime_error {
 public:
  AllInfeasible()
      : std::runtime_error(
            "no feasible correlation-length value on the search grid") {}
};

class DimensionMismatch : public std::runtime_error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : std::runtime_error("dimension mismatch: expected " +
                           std::to_string(expected) + ", got " +
                           std::to_string(got)) {}
};

/// Malformed input file (CSV syntax, missing header, non-numeric field).
class CsvFormatError : public std::runtime_error {
 public:
  CsvFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gpn
