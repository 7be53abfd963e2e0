#pragma once

#include <span>
#include <vector>

#include "gpn/errors.hpp"

namespace gpn {

/// Dense symmetric matrix, full storage. Writes through set() mirror the
/// transposed entry so symmetry holds exactly as stored.
class SymMatrix {
 public:
  explicit SymMatrix(int n);
  static SymMatrix identity(int n);

  int size() const { return n_; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, double v);
  double max_diagonal() const;

  /// Entrywise scaling, used by the scale-invariance checks.
  void scale(double c);

 private:
  int n_ = 0;
  std::vector<double> a_;
};

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
class CholFactor {
 public:
  int size() const { return n_; }
  double lower(int i, int j) const { return l_[static_cast<std::size_t>(i) * n_ + j]; }
  /// Smallest pivot value (before square root) that was accepted.
  double pivot_floor() const { return pivot_floor_; }
  double min_pivot() const { return min_pivot_; }
  double max_pivot() const { return max_pivot_; }

  /// Solves L z = b in place.
  void forward_solve(std::span<double> b) const;
  /// Solves (L L^T) x = b in place.
  void solve(std::span<double> b) const;
  std::vector<double> solve(std::vector<double> b) const;

  /// ln|M| = 2 * sum(ln diag(L)).
  double log_determinant() const;

  friend CholFactor cholesky(const SymMatrix& m);

 private:
  int n_ = 0;
  std::vector<double> l_;
  double pivot_floor_ = 0.0;
  double min_pivot_ = 0.0;  // smallest d_j = a_jj - sum l_jk^2 encountered
  double max_pivot_ = 0.0;
};

/// Cholesky factorization with a pivot floor of 1e-14 * max diagonal.
/// A pivot at or below the floor throws NotPositiveDefinite with the pivot
/// index; callers treat the corresponding parameter value as numerically
/// infeasible rather than as a fatal error.
CholFactor cholesky(const SymMatrix& m);

/// v^T M^{-1} v for the factored matrix M.
double quad_form(const CholFactor& f, std::span<const double> v);

/// ln|M| for the factored matrix M.
double log_det(const CholFactor& f);

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// returned in ascending order. Deterministic; intended for n up to a few
/// hundred where exactness beats speed.
std::vector<double> jacobi_eigenvalues(const SymMatrix& m);

struct ConditionNumber {
  double value = 1.0;
  /// Set when the value exceeds 1e12 (or is the +inf sentinel): double
  /// precision cannot certify condition numbers this large.
  bool beyond_double_precision = false;
};

/// 2-norm condition number max|lambda| / min|lambda| via a full Jacobi
/// eigen-solve. min|lambda| below the underflow floor yields the +inf
/// sentinel with the flag set.
ConditionNumber condition_number(const SymMatrix& m);

/// Cheap deterministic condition-number estimate: power iteration for the
/// largest eigenvalue plus inverse iteration (through the supplied factor)
/// for the smallest. Accurate to a few percent, which is all the
/// trust-threshold logic in the likelihood scan needs.
double estimate_condition(const SymMatrix& m, const CholFactor& f);

}  // namespace gpn
