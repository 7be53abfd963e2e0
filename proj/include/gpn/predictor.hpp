#pragma once

#include <span>

#include "gpn/dataset.hpp"
#include "gpn/kernels.hpp"

namespace gpn {

/// Kriging-style meta-model m_nu(x) = beta + t(x)^T R_nu^{-1} (y - beta)
/// with t(x) = (r(x, x_1), ..., r(x, x_n)) built from the plain correlation
/// (no nugget), plus the inverse-distance-weighted correction that restores
/// exact interpolation. Immutable after construction.
class Emulator {
 public:
  Emulator(Dataset d, KernelSpec k, double beta);

  /// m_nu(x); does not interpolate for nu > 0.
  double predict_metamodel(double x) const;

  /// m(x) = m_nu(x) + sum_i eps_i w_i / sum_i w_i with w_i = |x - x_i|^-2.
  /// At a design point (within 1e-12 relative) returns the continuity limit
  /// m_nu(x_j) + eps_j = y_j.
  double predict_interpolating(double x) const;

  std::span<const double> deviations() const { return deviations_; }
  std::span<const double> solved_residual() const { return solved_residual_; }
  double beta() const { return beta_; }
  const Dataset& data() const { return data_; }
  const KernelSpec& kernel() const { return kernel_; }

 private:
  Dataset data_;
  KernelSpec kernel_;
  double beta_ = 0.0;
  std::vector<double> solved_residual_;  // R_nu^{-1} (y - beta)
  std::vector<double> deviations_;       // eps_i = y_i - m_nu(x_i)
};

/// beta is supplied by a prior fit; the emulator does not refit.
Emulator build_emulator(const Dataset& d, const KernelSpec& k, double beta);

}  // namespace gpn
