#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gpn/errors.hpp"

namespace gpn {

/// Observations (x_i, y_i) of a deterministic model at strictly increasing
/// input locations.
struct Dataset {
  std::vector<double> x;
  std::vector<double> y;

  int size() const { return static_cast<int>(x.size()); }

  /// Validates strictly increasing x (duplicates within 1e-15 relative
  /// throw DuplicatePoints, decreasing throws invalid_argument) and equal
  /// lengths.
  static Dataset from_xy(std::vector<double> x, std::vector<double> y);
};

enum class ModelId { linear, sine };

ModelId parse_model(std::string_view name);
std::string to_string(ModelId id);

/// linear: x - 1/2;  sine: sin(2 pi x).
double eval_model(ModelId id, double x);

/// The model sampled on the equidistant grid x_i = (i-1)/(n-1).
Dataset builtin_dataset(ModelId id, int n);

}  // namespace gpn
