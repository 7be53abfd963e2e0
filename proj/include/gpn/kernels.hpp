#pragma once

#include <span>
#include <string>
#include <string_view>

#include "gpn/linalg.hpp"

namespace gpn {

enum class KernelFamily {
  exponential,  // r(x, x') = exp(-|x - x'| / psi)
  gaussian,     // r(x, x') = exp(-(x - x')^2 / psi); psi divides the
                // *squared* distance, not psi^2
};

KernelFamily parse_family(std::string_view name);
std::string to_string(KernelFamily family);

/// Correlation family with correlation length psi and nugget fraction nu.
/// The nugget enters at matrix level as the convex combination
/// (1 - nu) * R + nu * I, never inside corr() itself.
struct KernelSpec {
  KernelFamily family = KernelFamily::exponential;
  double psi = 1.0;
  double nu = 0.0;

  /// Throws std::invalid_argument unless psi > 0 and 0 <= nu < 1.
  void validate() const;
};

/// Nugget-free correlation r(x, x2); in (0, 1], equal to 1 iff x == x2.
double corr(const KernelSpec& k, double x, double x2);

/// Correlation matrix R_nu with entries (1-nu) r(x_i - x_j) + nu delta_ij.
/// Unit diagonal and exact symmetry by construction; reduces to plain R at
/// nu = 0. Points must be strictly increasing; two points coinciding within
/// 1e-15 relative throw DuplicatePoints.
SymMatrix corr_matrix(const KernelSpec& k, std::span<const double> points);

/// Converts an additive-jitter parameterization R + j*I into the convex
/// nugget fraction used here: the two differ by the overall scale 1 + j,
/// so nu = j / (1 + j).
double nu_from_additive_jitter(double jitter);

}  // namespace gpn
