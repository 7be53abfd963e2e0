#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpn/dataset.hpp"
#include "gpn/kernels.hpp"
#include "gpn/linalg.hpp"

namespace gpn {

enum class FitStatus {
  interior,          // argmax strictly inside the feasible grid
  unbounded_upper,   // argmax at the upper feasible end with a nondecreasing
                     // profile over the last decade: psi_hat = infinity in
                     // exact arithmetic
  boundary_lower,    // argmax at the lowest grid point
  degenerate_residual,
};

std::string to_string(FitStatus s);

enum class PointFlag { ok, not_pd, degenerate };

std::string to_string(PointFlag f);

/// Profile log-likelihood on a log-spaced grid of correlation lengths, with
/// a per-point numerical status instead of exceptions: infeasible points are
/// data, not crashes.
struct LikelihoodProfile {
  std::vector<double> psi;
  std::vector<double> value;
  std::vector<PointFlag> flag;

  int size() const { return static_cast<int>(psi.size()); }
};

struct Mode {
  double psi = 0.0;
  double loglik = 0.0;
};

struct FitOptions {
  double psi_min = 1e-3;
  double psi_max = 1e4;
  int grid_size = 400;
  /// Golden-section bracket tolerance, in natural-log psi units.
  double refine_tol = 1e-6;
  /// Grid points whose correlation matrix factorizes but has an estimated
  /// 2-norm condition number above this are flagged not_pd: past ~1e14
  /// fewer than three significant digits survive in the quadratic form and
  /// the profile values are numerical noise. Set to +inf to disable.
  double cond_trust_limit = 1e14;
};

struct FitResult {
  double beta_hat = 0.0;
  double sigma2_hat = 0.0;
  /// For non-interior statuses this is the feasible boundary point at which
  /// the remaining estimates were evaluated, not an interior maximizer.
  double psi_hat = 0.0;
  FitStatus status = FitStatus::interior;
  std::vector<Mode> modes;  // interior local maxima, ascending in psi
  ConditionNumber cond_at_psi_hat;
  double nu = 0.0;
  KernelFamily family = KernelFamily::exponential;
};

/// Generalized-least-squares mean (H^T R^{-1} H)^{-1} H^T R^{-1} y with the
/// constant trend h(x) = 1.
double beta_hat(const Dataset& d, const KernelSpec& k);

/// (1/n) (y - beta)^T R^{-1} (y - beta).
double sigma2_hat(const Dataset& d, const KernelSpec& k, double beta);

struct ProfilePoint {
  double value = 0.0;
  PointFlag flag = PointFlag::ok;
};

/// L(psi) = ln|R|^{-1/2} - (n/2) ln[(y - beta_hat)^T R^{-1} (y - beta_hat)]
/// with beta_hat recomputed at this psi; additive constants of the full
/// likelihood are dropped. Numerical failures are reported through the flag.
ProfilePoint profile_loglik(const Dataset& d, KernelFamily family, double nu,
                            double psi, double cond_trust_limit = 1e14);

/// Evaluates the profile on a log-spaced grid. grid_size must be >= 16.
LikelihoodProfile scan_profile(const Dataset& d, KernelFamily family, double nu,
                               double psi_min, double psi_max, int grid_size,
                               double cond_trust_limit = 1e14);

/// Interior local maxima of a scanned profile: grid points strictly greater
/// than both ok neighbors, each refined by golden section through the
/// supplied objective (log-psi -> value; nullopt where infeasible).
std::vector<Mode> find_modes(
    const LikelihoodProfile& p,
    const std::function<std::optional<double>(double)>& loglik_at_logpsi);

/// Convenience overload that re-evaluates the dataset's profile.
std::vector<Mode> find_modes(const LikelihoodProfile& p, const Dataset& d,
                             KernelFamily family, double nu,
                             double cond_trust_limit = 1e14);

/// Two-stage ML estimation of the correlation length: log-grid scan followed
/// by golden-section refinement (plus a shift-invariant parabolic polish)
/// around the best interior grid point. Grid ties break toward smaller psi.
/// Throws DegenerateData for constant y and AllInfeasible when no grid point
/// factorizes.
FitResult fit_mle(const Dataset& d, KernelFamily family, double nu,
                  const FitOptions& options = {});

}  // namespace gpn
