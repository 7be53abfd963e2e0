#include "gpn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpn {

SymMatrix::SymMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {
  if (n < 1) throw std::invalid_argument("SymMatrix: n must be >= 1");
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

void SymMatrix::set(int i, int j, double v) {
  a_[static_cast<std::size_t>(i) * n_ + j] = v;
  a_[static_cast<std::size_t>(j) * n_ + i] = v;
}

double SymMatrix::max_diagonal() const {
  double m = (*this)(0, 0);
  for (int i = 1; i < n_; ++i) m = std::max(m, (*this)(i, i));
  return m;
}

void SymMatrix::scale(double c) {
  for (auto& v : a_) v *= c;
}

CholFactor cholesky(const SymMatrix& m) {
  const int n = m.size();
  CholFactor f;
  f.n_ = n;
  f.l_.assign(static_cast<std::size_t>(n) * n, 0.0);
  f.pivot_floor_ = 1e-14 * m.max_diagonal();
  f.min_pivot_ = std::numeric_limits<double>::infinity();
  f.max_pivot_ = 0.0;

  auto l = [&f, n](int i, int j) -> double& {
    return f.l_[static_cast<std::size_t>(i) * n + j];
  };
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= f.pivot_floor_) throw NotPositiveDefinite(j, d, f.pivot_floor_);
    f.min_pivot_ = std::min(f.min_pivot_, d);
    f.max_pivot_ = std::max(f.max_pivot_, d);
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / root;
    }
  }
  return f;
}

void CholFactor::forward_solve(std::span<double> b) const {
  if (static_cast<int>(b.size()) != n_) throw DimensionMismatch(n_, b.size());
  for (int i = 0; i < n_; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= lower(i, k) * b[k];
    b[i] = s / lower(i, i);
  }
}

void CholFactor::solve(std::span<double> b) const {
  forward_solve(b);
  for (int i = n_ - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n_; ++k) s -= lower(k, i) * b[k];
    b[i] = s / lower(i, i);
  }
}

std::vector<double> CholFactor::solve(std::vector<double> b) const {
  solve(std::span<double>(b));
  return b;
}

double CholFactor::log_determinant() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += std::log(lower(i, i));
  return 2.0 * s;
}

double quad_form(const CholFactor& f, std::span<const double> v) {
  if (static_cast<int>(v.size()) != f.size())
    throw DimensionMismatch(f.size(), v.size());
  // z = L^{-1} v, then v^T M^{-1} v = z^T z >= 0 by construction.
  std::vector<double> z(v.begin(), v.end());
  f.forward_solve(z);
  double s = 0.0;
  for (double zi : z) s += zi * zi;
  return s;
}

double log_det(const CholFactor& f) { return f.log_determinant(); }

std::vector<double> jacobi_eigenvalues(const SymMatrix& m) {
  const int n = m.size();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = m(i, j);
  auto at = [&a, n](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * n + j];
  };

  double frob = 0.0;
  for (double v : a) frob += v * v;
  frob = std::sqrt(frob);
  const double tol = 1e-15 * std::max(frob, 1e-300);

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (std::sqrt(2.0 * off) <= tol) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        // smaller-root tangent keeps rotations below 45 degrees
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                             : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

ConditionNumber condition_number(const SymMatrix& m) {
  const std::vector<double> eig = jacobi_eigenvalues(m);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double e : eig) {
    const double a = std::fabs(e);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  ConditionNumber c;
  if (lo < 1e-290 * std::max(hi, 1.0)) {
    c.value = std::numeric_limits<double>::infinity();
    c.beyond_double_precision = true;
    return c;
  }
  c.value = hi / lo;
  c.beyond_double_precision = c.value > 1e12;
  return c;
}

double estimate_condition(const SymMatrix& m, const CholFactor& f) {
  const int n = m.size();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  // Largest eigenvalue: power iteration from the smoothest start vector.
  std::vector<double> u(n, inv_sqrt_n), w(n);
  double lam_max = 1.0;
  for (int it = 0; it < 48; ++it) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += m(i, j) * u[j];
      w[i] = s;
    }
    double norm = 0.0;
    for (double v : w) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return std::numeric_limits<double>::infinity();
    const double prev = lam_max;
    lam_max = norm;
    for (int i = 0; i < n; ++i) u[i] = w[i] / norm;
    if (it > 2 && std::fabs(lam_max - prev) <= 1e-4 * lam_max) break;
  }

  // Smallest eigenvalue: inverse iteration from the roughest start vector.
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = (i % 2 == 0 ? inv_sqrt_n : -inv_sqrt_n);
  double inv_lam_min = 1.0;
  for (int it = 0; it < 48; ++it) {
    std::vector<double> z = v;
    f.solve(std::span<double>(z));
    double norm = 0.0;
    for (double zi : z) norm += zi * zi;
    norm = std::sqrt(norm);
    if (!std::isfinite(norm) || norm == 0.0)
      return std::numeric_limits<double>::infinity();
    const double prev = inv_lam_min;
    inv_lam_min = norm;
    for (int i = 0; i < n; ++i) v[i] = z[i] / norm;
    if (it > 2 && std::fabs(inv_lam_min - prev) <= 1e-4 * inv_lam_min) break;
  }

  return lam_max * inv_lam_min;
}

}  // namespace gpn
