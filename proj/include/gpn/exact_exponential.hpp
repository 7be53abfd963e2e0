#pragma once

#include <span>
#include <vector>

#include "gpn/linalg.hpp"

namespace gpn {

// Closed forms that exist only for the exponential kernel without nugget.
// They serve both as the engine for the equidistant linear-model experiments
// and as independent oracles for the generic dense path.

/// Equidistant grid x_i = (i-1)/(n-1) on [0,1] with correlation length psi.
struct EquidistantSpec {
  int n = 2;
  double psi = 1.0;

  /// lambda = exp(-1 / ((n-1) psi)), the common inter-point correlation.
  double lambda() const;
};

/// Bidiagonal factor V with R^{-1} = V^T V for the exponential kernel on
/// arbitrary strictly increasing points. Row 1 of V is the first unit row;
/// row i holds -mu_i/sqrt(1-mu_i^2) and 1/sqrt(1-mu_i^2) with
/// mu_i = exp(-(x_i - x_{i-1})/psi).
struct BidiagFactor {
  int n = 0;
  std::vector<double> mu;  // mu[i-1] = mu_{i+1} in 1-based row numbering

  double v_entry(int row, int col) const;
};

BidiagFactor v_factor(double psi, std::span<const double> points);

/// Dense V^T V, used when comparing against the generic inverse.
SymMatrix vtv_matrix(const BidiagFactor& f);

/// y^T R^{-1} y on the equidistant grid:
/// (y_1^2 + y_n^2)/(1-l^2) + sum_{2..n-1} y_i^2 (1+l^2)/(1-l^2)
///   - 2 sum_{1..n-1} y_i y_{i+1} l/(1-l^2).
double quad_form_equidistant(std::span<const double> y, const EquidistantSpec& spec);

/// |R|^{-1/2} = (1 - lambda^2)^{-(n-1)/2}.
double det_inv_sqrt_equidistant(const EquidistantSpec& spec);

/// ln|R| = (n-1) ln(1 - lambda^2), evaluated via log1p for lambda near 1.
double log_det_equidistant(const EquidistantSpec& spec);

/// y^T R^{-1} y for the linear model y_i = x_i - 1/2:
/// 1/2 * 1/(1-l^2) + (n^2-5n+6)/(12(n-1)) * (1+l^2)/(1-l^2)
///   - (n^2-2n-3)/(6(n-1)) * l/(1-l^2).
double quad_form_linear_model(const EquidistantSpec& spec);

/// Asymptotic expansion of the ML correlation length for the linear model:
/// n/2 - 7/6 - 7/(18n) - 17/(54 n^2).
double psi_hat_expansion(int n);

/// Closed-form profile log-likelihood of the linear model,
/// L = 1/2 ln(1-l^2) - n/2 ln Q(l), with the additive constants dropped.
double profile_loglik_linear(const EquidistantSpec& spec);

/// Numeric maximizer of profile_loglik_linear over psi. Golden-section
/// bracketing followed by bisection on the analytic derivative in lambda
/// (a cubic), so the result carries near machine precision rather than the
/// ~1e-6 flat-top resolution of value-comparison search.
double psi_hat_numeric_linear(int n);

/// The equidistant grid itself.
std::vector<double> equidistant_points(int n);

}  // namespace gpn
