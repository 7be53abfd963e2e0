#include "gpn/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace gpn {

KernelFamily parse_family(std::string_view name) {
  if (name == "exponential") return KernelFamily::exponential;
  if (name == "gaussian") return KernelFamily::gaussian;
  throw std::invalid_argument("unknown kernel family: " + std::string(name));
}

std::string to_string(KernelFamily family) {
  return family == KernelFamily::exponential ? "exponential" : "gaussian";
}

void KernelSpec::validate() const {
  if (!(psi > 0.0)) throw std::invalid_argument("kernel: psi must be > 0");
  if (!(nu >= 0.0 && nu < 1.0))
    throw std::invalid_argument("kernel: nu must be in [0, 1)");
}

double corr(const KernelSpec& k, double x, double x2) {
  const double d = x - x2;
  if (d == 0.0) return 1.0;
  if (k.family == KernelFamily::exponential) return std::exp(-std::fabs(d) / k.psi);
  return std::exp(-(d * d) / k.psi);
}

SymMatrix corr_matrix(const KernelSpec& k, std::span<const double> points) {
  k.validate();
  const int n = static_cast<int>(points.size());
  if (n < 1) throw std::invalid_argument("corr_matrix: need at least one point");
  for (int i = 1; i < n; ++i) {
    const double gap = points[i] - points[i - 1];
    const double scale =
        std::max({std::fabs(points[i]), std::fabs(points[i - 1]), 1.0});
    if (gap <= 1e-15 * scale) {
      if (gap < 0.0) throw std::invalid_argument("corr_matrix: points not sorted");
      throw DuplicatePoints(i);
    }
  }
  SymMatrix r(n);
  for (int i = 0; i < n; ++i) {
    r.set(i, i, 1.0);  // (1-nu)*1 + nu exactly
    for (int j = i + 1; j < n; ++j)
      r.set(i, j, (1.0 - k.nu) * corr(k, points[i], points[j]));
  }
  return r;
}

double nu_from_additive_jitter(double jitter) {
  if (jitter < 0.0) throw std::invalid_argument("jitter must be >= 0");
  return jitter / (1.0 + jitter);
}

}  // namespace gpn
