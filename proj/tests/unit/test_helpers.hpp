#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gpn/linalg.hpp"

namespace gpn_test {

// Small deterministic generator so property tests are reproducible.
struct Lcg {
  std::uint64_t s;

  explicit Lcg(std::uint64_t seed) : s(seed) {}

  std::uint64_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s;
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline std::vector<double> random_sorted_points(Lcg& rng, int n) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform();
  std::sort(x.begin(), x.end());
  for (int i = 1; i < n; ++i)
    if (x[i] - x[i - 1] < 1e-9) x[i] = x[i - 1] + 1e-9;
  return x;
}

inline gpn::SymMatrix random_spd(Lcg& rng, int n) {
  std::vector<std::vector<double>> b(n, std::vector<double>(n));
  for (auto& row : b)
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
  gpn::SymMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += b[i][k] * b[j][k];
      m.set(i, j, s + (i == j ? 0.5 : 0.0));
    }
  }
  return m;
}

// Dense inverse by Gauss-Jordan with partial pivoting: an oracle that shares
// no code with the Cholesky path it checks.
inline std::vector<std::vector<double>> dense_inverse(const gpn::SymMatrix& m) {
  const int n = m.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(2 * n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
    a[i][n + i] = 1.0;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[piv], a[col]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular matrix in oracle");
    const double d = a[col][col];
    for (double& v : a[col]) v /= d;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<std::vector<double>> inv(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

inline double max_abs(const std::vector<std::vector<double>>& m) {
  double v = 0.0;
  for (const auto& row : m)
    for (const double e : row) v = std::max(v, std::fabs(e));
  return v;
}

}  // namespace gpn_test
