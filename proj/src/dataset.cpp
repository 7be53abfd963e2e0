#include "gpn/dataset.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gpn/exact_exponential.hpp"

namespace gpn {

Dataset Dataset::from_xy(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) throw DimensionMismatch(x.size(), y.size());
  if (x.empty()) throw std::invalid_argument("dataset: empty");
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double gap = x[i] - x[i - 1];
    const double scale = std::max({std::fabs(x[i]), std::fabs(x[i - 1]), 1.0});
    if (gap <= 1e-15 * scale) {
      if (gap < 0.0) throw UnsortedPoints();
      throw DuplicatePoints(static_cast<int>(i));
    }
  }
  return Dataset{std::move(x), std::move(y)};
}

ModelId parse_model(std::string_view name) {
  if (name == "linear") return ModelId::linear;
  if (name == "sin") return ModelId::sine;
  throw std::invalid_argument("unknown model: " + std::string(name));
}

std::string to_string(ModelId id) {
  return id == ModelId::linear ? "linear" : "sin";
}

double eval_model(ModelId id, double x) {
  if (id == ModelId::linear) return x - 0.5;
  return std::sin(2.0 * std::numbers::pi * x);
}

Dataset builtin_dataset(ModelId id, int n) {
  std::vector<double> x = equidistant_points(n);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = eval_model(id, x[i]);
  return Dataset{std::move(x), std::move(y)};
}

}  // namespace gpn
