#include "gpn/exact_exponential.hpp"

#include <cmath>
#include <stdexcept>

namespace gpn {

namespace {

void require_n(int n, int least) {
  if (n < least)
    throw std::invalid_argument("equidistant closed forms need n >= " +
                                std::to_string(least));
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument(
        "lambda must lie in [0, 1); psi = infinity is a caller-side sentinel");
}

}  // namespace

double EquidistantSpec::lambda() const {
  require_n(n, 2);
  if (!(psi > 0.0)) throw std::invalid_argument("psi must be > 0");
  return std::exp(-1.0 / ((n - 1) * psi));
}

double BidiagFactor::v_entry(int row, int col) const {
  if (row == 0) return col == 0 ? 1.0 : 0.0;
  const double m = mu[row - 1];
  const double denom = std::sqrt((1.0 - m) * (1.0 + m));
  if (col == row) return 1.0 / denom;
  if (col == row - 1) return -m / denom;
  return 0.0;
}

BidiagFactor v_factor(double psi, std::span<const double> points) {
  if (!(psi > 0.0)) throw std::invalid_argument("psi must be > 0");
  const int n = static_cast<int>(points.size());
  if (n < 1) throw std::invalid_argument("need at least one point");
  BidiagFactor f;
  f.n = n;
  f.mu.resize(n - 1);
  for (int i = 1; i < n; ++i) {
    const double gap = points[i] - points[i - 1];
    if (gap <= 0.0) {
      if (gap < 0.0) throw std::invalid_argument("points not sorted");
      throw DuplicatePoints(i);
    }
    f.mu[i - 1] = std::exp(-gap / psi);
  }
  return f;
}

SymMatrix vtv_matrix(const BidiagFactor& f) {
  SymMatrix m(f.n);
  for (int i = 0; i < f.n; ++i) {
    for (int j = i; j < f.n; ++j) {
      double s = 0.0;
      // V is lower bidiagonal, so column i of V has entries in rows i, i+1.
      for (int r = j; r <= j + 1 && r < f.n; ++r)
        s += f.v_entry(r, i) * f.v_entry(r, j);
      m.set(i, j, s);
    }
  }
  return m;
}

double quad_form_equidistant(std::span<const double> y,
                             const EquidistantSpec& spec) {
  require_n(spec.n, 2);
  if (static_cast<int>(y.size()) != spec.n)
    throw DimensionMismatch(spec.n, y.size());
  const double l = spec.lambda();
  require_lambda(l);
  const int n = spec.n;
  const double denom = 1.0 - l * l;
  double s = (y[0] * y[0] + y[n - 1] * y[n - 1]) / denom;
  for (int i = 1; i + 1 < n; ++i) s += y[i] * y[i] * (1.0 + l * l) / denom;
  for (int i = 0; i + 1 < n; ++i) s -= 2.0 * y[i] * y[i + 1] * l / denom;
  return s;
}

double det_inv_sqrt_equidistant(const EquidistantSpec& spec) {
  return std::exp(-0.5 * log_det_equidistant(spec));
}

double log_det_equidistant(const EquidistantSpec& spec) {
  require_n(spec.n, 2);
  const double l = spec.lambda();
  require_lambda(l);
  return (spec.n - 1) * std::log1p(-l * l);
}

double quad_form_linear_model(const EquidistantSpec& spec) {
  require_n(spec.n, 2);
  const double l = spec.lambda();
  require_lambda(l);
  const double n = spec.n;
  const double denom = 1.0 - l * l;
  const double a = (n * n - 5.0 * n + 6.0) / (12.0 * (n - 1.0));
  const double b = (n * n - 2.0 * n - 3.0) / (6.0 * (n - 1.0));
  return 0.5 / denom + a * (1.0 + l * l) / denom - b * l / denom;
}

double psi_hat_expansion(int n) {
  require_n(n, 2);
  const double nn = n;
  return nn / 2.0 - 7.0 / 6.0 - 7.0 / (18.0 * nn) - 17.0 / (54.0 * nn * nn);
}

namespace {

// L and dL/dlambda for the linear model, as functions of lambda in (0, 1):
//   L(l)  = 1/2 log(1 - l^2) - n/2 log Q(l)
//   Q(l)  = (1/2 + a) + a l^2 - b l          (quad form times (1 - l^2))
//   L'(l) = -l/(1-l^2) - (n/2)(2 a l - b)/Q(l)
struct LinearProfile {
  double n, a, b;

  explicit LinearProfile(int n_pts)
      : n(n_pts),
        a((n * n - 5.0 * n + 6.0) / (12.0 * (n - 1.0))),
        b((n * n - 2.0 * n - 3.0) / (6.0 * (n - 1.0))) {}

  double q(double l) const { return 0.5 + a + a * l * l - b * l; }

  double value(double l) const {
    return 0.5 * std::log1p(-l * l) - 0.5 * n * std::log(q(l));
  }

  // Sign-stable form of L'(l) * 2 Q(l) (1 - l^2): a cubic in l.
  double deriv_scaled(double l) const {
    return -2.0 * l * q(l) - n * (2.0 * a * l - b) * (1.0 - l * l);
  }
};

}  // namespace

double profile_loglik_linear(const EquidistantSpec& spec) {
  require_n(spec.n, 2);
  const double l = spec.lambda();
  require_lambda(l);
  return LinearProfile(spec.n).value(l);
}

double psi_hat_numeric_linear(int n) {
  require_n(n, 2);
  const LinearProfile prof(n);

  // Bracket the maximum in lambda by golden section, then pin the stationary
  // point by bisection on the analytic derivative (no flat-top loss).
  double a = 1e-9, b = 1.0 - 1e-9;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = prof.value(c);
  double fd = prof.value(d);
  while (b - a > 1e-3) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = prof.value(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = prof.value(d);
    }
  }

  double lo = a, hi = b;
  if (prof.deriv_scaled(lo) <= 0.0 || prof.deriv_scaled(hi) >= 0.0) {
    // No sign change: the profile is monotone on [lo, hi]; report the better
    // endpoint. Happens for n <= 3 where the maximizer sits at lambda -> 0.
    const double l_best = prof.value(lo) >= prof.value(hi) ? lo : hi;
    return -1.0 / ((n - 1) * std::log(l_best));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (prof.deriv_scaled(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double l_hat = 0.5 * (lo + hi);
  return -1.0 / ((n - 1) * std::log(l_hat));
}

std::vector<double> equidistant_points(int n) {
  require_n(n, 2);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = static_cast<double>(i) / (n - 1);
  return x;
}

}  // namespace gpn
