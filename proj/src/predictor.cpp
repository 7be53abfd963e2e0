#include "gpn/predictor.hpp"

#include <cmath>

#include "gpn/linalg.hpp"

namespace gpn {

Emulator::Emulator(Dataset d, KernelSpec k, double beta)
    : data_(std::move(d)), kernel_(k), beta_(beta) {
  kernel_.validate();
  const int n = data_.size();
  const CholFactor f = cholesky(corr_matrix(kernel_, data_.x));
  solved_residual_.resize(n);
  for (int i = 0; i < n; ++i) solved_residual_[i] = data_.y[i] - beta_;
  f.solve(std::span<double>(solved_residual_));

  // t(x_i) uses the plain correlation (no nugget), so for nu > 0 the
  // meta-model does not pass through the data.
  deviations_.resize(n);
  for (int i = 0; i < n; ++i)
    deviations_[i] = data_.y[i] - predict_metamodel(data_.x[i]);
}

double Emulator::predict_metamodel(double x) const {
  double s = beta_;
  for (int i = 0; i < data_.size(); ++i)
    s += corr(kernel_, x, data_.x[i]) * solved_residual_[i];
  return s;
}

double Emulator::predict_interpolating(double x) const {
  const int n = data_.size();
  // Exact-hit rule: the singular limit of the inverse-square weights.
  for (int i = 0; i < n; ++i) {
    const double scale = std::max({std::fabs(x), std::fabs(data_.x[i]), 1.0});
    if (std::fabs(x - data_.x[i]) <= 1e-12 * scale)
      return predict_metamodel(data_.x[i]) + deviations_[i];
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = x - data_.x[i];
    const double w = 1.0 / (dx * dx);
    num += deviations_[i] * w;
    den += w;
  }
  return predict_metamodel(x) + num / den;
}

Emulator build_emulator(const Dataset& d, const KernelSpec& k, double beta) {
  return Emulator(d, k, beta);
}

}  // namespace gpn
