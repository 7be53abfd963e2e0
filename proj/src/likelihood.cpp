#include "gpn/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpn {

std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::interior: return "interior";
    case FitStatus::unbounded_upper: return "unbounded_upper";
    case FitStatus::boundary_lower: return "boundary_lower";
    case FitStatus::degenerate_residual: return "degenerate_residual";
  }
  return "?";
}

std::string to_string(PointFlag f) {
  switch (f) {
    case PointFlag::ok: return "ok";
    case PointFlag::not_pd: return "not_pd";
    case PointFlag::degenerate: return "degenerate";
  }
  return "?";
}

namespace {

struct EvalDetail {
  double value = 0.0;
  PointFlag flag = PointFlag::ok;
  double beta = 0.0;
  double sigma2 = 0.0;
};

// One profile evaluation. The conditioning trust test piggybacks on the
// Cholesky pivots: only when the pivot ratio suggests the matrix might be
// anywhere near the limit is the (still cheap) eigenvalue estimate run.
EvalDetail evaluate(const Dataset& d, KernelFamily family, double nu,
                    double psi, double cond_trust_limit) {
  EvalDetail out;
  const int n = d.size();
  const KernelSpec k{family, psi, nu};
  const SymMatrix r = corr_matrix(k, d.x);

  try {
    const CholFactor f = cholesky(r);
    if (std::isfinite(cond_trust_limit) &&
        f.max_pivot() > 1e4 * f.min_pivot() &&
        estimate_condition(r, f) > cond_trust_limit) {
      out.flag = PointFlag::not_pd;
      return out;
    }

    std::vector<double> z1(n, 1.0);
    std::vector<double> zy = d.y;
    f.forward_solve(z1);
    f.forward_solve(zy);
    double z11 = 0.0, z1y = 0.0;
    for (int i = 0; i < n; ++i) {
      z11 += z1[i] * z1[i];
      z1y += z1[i] * zy[i];
    }
    out.beta = z1y / z11;
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ri = zy[i] - out.beta * z1[i];
      quad += ri * ri;
    }
    out.sigma2 = quad / n;
    if (quad <= 1e-300) {
      out.flag = PointFlag::degenerate;
      return out;
    }
    out.value = -0.5 * f.log_determinant() - 0.5 * n * std::log(quad);
  } catch (const NotPositiveDefinite&) {
    out.flag = PointFlag::not_pd;
  }
  return out;
}

// Golden-section maximization over log psi, then one shift-invariant
// parabolic polish: value-comparison search alone bottoms out at the
// likelihood's flat top (~1e-6 relative), which is too coarse for the
// equivariance guarantees.
double refine_log_max(
    const std::function<std::optional<double>(double)>& objective, double la,
    double lb, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  auto eval = [&objective](double lp) {
    const auto v = objective(lp);
    return v ? *v : -std::numeric_limits<double>::infinity();
  };
  double a = la, b = lb;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = eval(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = eval(d);
    }
  }
  double m = 0.5 * (a + b);
  const double h = 5e-5;
  if (m - h > la && m + h < lb) {
    const double f0 = eval(m);
    const double fm = eval(m - h);
    const double fp = eval(m + h);
    const double denom = fp + fm - 2.0 * f0;
    if (std::isfinite(f0) && std::isfinite(fm) && std::isfinite(fp) &&
        denom < 0.0) {
      const double shift = -h * (fp - fm) / (2.0 * denom);
      if (std::fabs(shift) <= h) m += shift;
    }
  }
  return m;
}

}  // namespace

double beta_hat(const Dataset& d, const KernelSpec& k) {
  const int n = d.size();
  const CholFactor f = cholesky(corr_matrix(k, d.x));
  std::vector<double> z1(n, 1.0);
  std::vector<double> zy = d.y;
  f.forward_solve(z1);
  f.forward_solve(zy);
  double z11 = 0.0, z1y = 0.0;
  for (int i = 0; i < n; ++i) {
    z11 += z1[i] * z1[i];
    z1y += z1[i] * zy[i];
  }
  return z1y / z11;
}

double sigma2_hat(const Dataset& d, const KernelSpec& k, double beta) {
  const int n = d.size();
  const CholFactor f = cholesky(corr_matrix(k, d.x));
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = d.y[i] - beta;
  return quad_form(f, r) / n;
}

ProfilePoint profile_loglik(const Dataset& d, KernelFamily family, double nu,
                            double psi, double cond_trust_limit) {
  if (!(psi > 0.0)) throw std::invalid_argument("psi must be > 0");
  const EvalDetail e = evaluate(d, family, nu, psi, cond_trust_limit);
  return ProfilePoint{e.value, e.flag};
}

LikelihoodProfile scan_profile(const Dataset& d, KernelFamily family, double nu,
                               double psi_min, double psi_max, int grid_size,
                               double cond_trust_limit) {
  if (!(psi_min > 0.0 && psi_min < psi_max))
    throw std::invalid_argument("need 0 < psi_min < psi_max");
  if (grid_size < 16) throw std::invalid_argument("grid size must be >= 16");

  LikelihoodProfile p;
  p.psi.resize(grid_size);
  p.value.resize(grid_size);
  p.flag.resize(grid_size);
  const double la = std::log(psi_min);
  const double lb = std::log(psi_max);
  for (int i = 0; i < grid_size; ++i) {
    const double t = static_cast<double>(i) / (grid_size - 1);
    p.psi[i] = (i == 0) ? psi_min
               : (i == grid_size - 1) ? psi_max
                                      : std::exp(la + t * (lb - la));
    const EvalDetail e = evaluate(d, family, nu, p.psi[i], cond_trust_limit);
    p.value[i] = e.flag == PointFlag::ok ? e.value
                                         : std::numeric_limits<double>::quiet_NaN();
    p.flag[i] = e.flag;
  }
  return p;
}

std::vector<Mode> find_modes(
    const LikelihoodProfile& p,
    const std::function<std::optional<double>(double)>& loglik_at_logpsi) {
  std::vector<Mode> modes;
  int ok_count = 0;
  for (const PointFlag f : p.flag)
    if (f == PointFlag::ok) ++ok_count;
  if (ok_count < 3) return modes;

  for (int i = 1; i + 1 < p.size(); ++i) {
    if (p.flag[i] != PointFlag::ok || p.flag[i - 1] != PointFlag::ok ||
        p.flag[i + 1] != PointFlag::ok)
      continue;
    if (!(p.value[i] > p.value[i - 1] && p.value[i] > p.value[i + 1])) continue;
    const double lm = refine_log_max(loglik_at_logpsi, std::log(p.psi[i - 1]),
                                     std::log(p.psi[i + 1]), 1e-6);
    Mode m;
    m.psi = std::exp(lm);
    const auto v = loglik_at_logpsi(lm);
    m.loglik = v ? *v : p.value[i];
    modes.push_back(m);
  }
  std::sort(modes.begin(), modes.end(),
            [](const Mode& a, const Mode& b) { return a.psi < b.psi; });
  return modes;
}

std::vector<Mode> find_modes(const LikelihoodProfile& p, const Dataset& d,
                             KernelFamily family, double nu,
                             double cond_trust_limit) {
  return find_modes(p, [&](double lp) -> std::optional<double> {
    const EvalDetail e = evaluate(d, family, nu, std::exp(lp), cond_trust_limit);
    if (e.flag != PointFlag::ok) return std::nullopt;
    return e.value;
  });
}

FitResult fit_mle(const Dataset& d, KernelFamily family, double nu,
                  const FitOptions& options) {
  if (d.size() < 2) throw std::invalid_argument("fit needs n >= 2");
  const auto [ymin, ymax] = std::minmax_element(d.y.begin(), d.y.end());
  if (*ymin == *ymax) throw DegenerateData();

  const LikelihoodProfile p =
      scan_profile(d, family, nu, options.psi_min, options.psi_max,
                   options.grid_size, options.cond_trust_limit);

  std::vector<int> ok;
  bool any_degenerate = false;
  for (int i = 0; i < p.size(); ++i) {
    if (p.flag[i] == PointFlag::ok) ok.push_back(i);
    if (p.flag[i] == PointFlag::degenerate) any_degenerate = true;
  }

  FitResult out;
  out.nu = nu;
  out.family = family;

  auto objective = [&](double lp) -> std::optional<double> {
    const EvalDetail e =
        evaluate(d, family, nu, std::exp(lp), options.cond_trust_limit);
    if (e.flag != PointFlag::ok) return std::nullopt;
    return e.value;
  };

  if (ok.empty()) {
    if (!any_degenerate) throw AllInfeasible();
    // Non-constant y whose residual vanished everywhere on the grid.
    int first_degenerate = 0;
    for (int i = 0; i < p.size(); ++i)
      if (p.flag[i] == PointFlag::degenerate) { first_degenerate = i; break; }
    out.status = FitStatus::degenerate_residual;
    out.psi_hat = p.psi[first_degenerate];
    const EvalDetail e = evaluate(d, family, nu, out.psi_hat,
                                  options.cond_trust_limit);
    out.beta_hat = e.beta;
    out.sigma2_hat = e.sigma2;
    out.cond_at_psi_hat =
        condition_number(corr_matrix({family, out.psi_hat, nu}, d.x));
    return out;
  }

  int best = ok.front();  // ascending scan with strict > keeps smaller psi on ties
  for (const int i : ok)
    if (p.value[i] > p.value[best]) best = i;
  const int first_ok = ok.front();
  const int last_ok = ok.back();

  out.modes = find_modes(p, objective);

  if (best == last_ok) {
    // Nondecreasing over the last decade of feasible points, with a small
    // slack so roundoff wobble does not mask a genuinely rising profile.
    bool nondecreasing = true;
    const double decade_start = p.psi[last_ok] / 10.0;
    int prev = -1;
    for (const int i : ok) {
      if (p.psi[i] < decade_start) continue;
      if (prev >= 0) {
        const double slack = 1e-9 * (1.0 + std::fabs(p.value[prev]));
        if (p.value[i] < p.value[prev] - slack) {
          nondecreasing = false;
          break;
        }
      }
      prev = i;
    }
    if (nondecreasing) {
      out.status = FitStatus::unbounded_upper;
      out.psi_hat = p.psi[last_ok];
    }
  }

  if (out.status != FitStatus::unbounded_upper) {
    if (best == first_ok) {
      out.status = FitStatus::boundary_lower;
      out.psi_hat = p.psi[first_ok];
    } else {
      // Bracket with the nearest feasible neighbors; an argmax at the
      // feasible upper end with a non-monotone tail refines one-sided.
      const auto it = std::find(ok.begin(), ok.end(), best);
      const int left = *(it - 1);
      const int right = (it + 1 != ok.end()) ? *(it + 1) : best;
      out.status = FitStatus::interior;
      out.psi_hat = std::exp(refine_log_max(objective, std::log(p.psi[left]),
                                            std::log(p.psi[right]),
                                            options.refine_tol));
    }
  }

  EvalDetail e = evaluate(d, family, nu, out.psi_hat, options.cond_trust_limit);
  if (e.flag != PointFlag::ok && out.status == FitStatus::interior) {
    // refinement strayed off the feasible set; retreat to the scanned argmax
    out.psi_hat = p.psi[best];
    e = evaluate(d, family, nu, out.psi_hat, options.cond_trust_limit);
  }
  out.beta_hat = e.beta;
  out.sigma2_hat = e.sigma2;
  out.cond_at_psi_hat =
      condition_number(corr_matrix({family, out.psi_hat, nu}, d.x));
  return out;
}

}  // namespace gpn
