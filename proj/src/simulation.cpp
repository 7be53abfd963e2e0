#include "gpn/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "gpn/exact_exponential.hpp"

namespace gpn {

AmplitudeConvention parse_convention(std::string_view name) {
  if (name == "std_dev") return AmplitudeConvention::std_dev;
  if (name == "variance") return AmplitudeConvention::variance;
  throw std::invalid_argument("unknown amplitude convention: " +
                              std::string(name));
}

std::string to_string(AmplitudeConvention c) {
  return c == AmplitudeConvention::std_dev ? "std_dev" : "variance";
}

void SimConfig::validate() const {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (sigma < 0.0 || tau < 0.0)
    throw std::invalid_argument("amplitudes must be >= 0");
  for (const double nu : nu_values)
    if (!(nu >= 0.0 && nu < 1.0))
      throw std::invalid_argument("nu values must be in [0, 1)");
  if (sampling_jitter < 0.0)
    throw std::invalid_argument("sampling jitter must be >= 0");
  if (max_workers < 0) throw std::invalid_argument("max_workers must be >= 0");
  if (nu_values.empty()) throw std::invalid_argument("need at least one nu");
  if (!(fit.psi_min > 0.0 && fit.psi_min < fit.psi_max) || fit.grid_size < 16)
    throw std::invalid_argument("invalid fit options");
}

std::vector<double> sample_gp_path(std::span<const double> points,
                                   const KernelSpec& k, SplitMix64& stream,
                                   double additive_jitter) {
  if (k.nu != 0.0)
    throw std::invalid_argument(
        "sample_gp_path samples the nugget-free signal process");
  const int n = static_cast<int>(points.size());
  std::vector<double> z = standard_normals(stream, n);
  if (n == 1) return z;

  SymMatrix cov = corr_matrix(k, points);
  if (additive_jitter > 0.0)
    for (int i = 0; i < n; ++i) cov.set(i, i, cov(i, i) + additive_jitter);

  CholFactor f = [&] {
    try {
      return cholesky(cov);
    } catch (const NotPositiveDefinite&) {
      throw std::runtime_error(
          "signal covariance is not factorable in double precision; retry "
          "with a small simulation-only additive jitter (1e-10) and record "
          "it in the run provenance");
    }
  }();

  std::vector<double> path(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += f.lower(i, j) * z[j];
    path[i] = s;
  }
  return path;
}

namespace {

struct ReplicateOutcome {
  FitStatus status = FitStatus::interior;
  bool infeasible = false;  // AllInfeasible (no grid point factorized)
  double beta = 0.0, sigma = 0.0, psi = 0.0;
};

double amplitude(double s, AmplitudeConvention c) {
  return c == AmplitudeConvention::std_dev ? s : s * s;
}

struct MeanSd {
  double mean = 0.0, sd = 0.0;
};

// Two-pass mean and sample standard deviation in index order, so the result
// does not depend on how replicates were scheduled across threads.
MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd out;
  if (v.empty()) return out;
  double s = 0.0, c = 0.0;
  for (const double x : v) {  // Kahan
    const double t = x - c;
    const double u = s + t;
    c = (u - s) - t;
    s = u;
  }
  out.mean = s / v.size();
  if (v.size() > 1) {
    double q = 0.0;
    for (const double x : v) q += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(q / (v.size() - 1));
  }
  return out;
}

}  // namespace

StudySummary run_study(const SimConfig& cfg) {
  cfg.validate();
  const std::vector<double> points = equidistant_points(cfg.n);
  const KernelSpec signal_kernel{KernelFamily::gaussian, cfg.psi, 0.0};
  const std::size_t n_nu = cfg.nu_values.size();

  {
    // probe the signal covariance on this thread so an unfactorable
    // configuration raises a clean error instead of dying in a worker
    SplitMix64 probe(0);
    sample_gp_path(points, signal_kernel, probe, cfg.sampling_jitter);
  }

  std::vector<ReplicateOutcome> outcomes(
      static_cast<std::size_t>(cfg.replicates) * n_nu);

  auto run_replicate = [&](int rep) {
    SplitMix64 signal_stream =
        replicate_stream(cfg.seed, rep, StreamRole::signal);
    SplitMix64 noise_stream = replicate_stream(cfg.seed, rep, StreamRole::noise);
    const std::vector<double> eps1 =
        sample_gp_path(points, signal_kernel, signal_stream, cfg.sampling_jitter);
    const std::vector<double> eps2 = standard_normals(noise_stream, cfg.n);

    const double a_sigma = amplitude(cfg.sigma, cfg.convention);
    const double a_tau = amplitude(cfg.tau, cfg.convention);
    std::vector<double> y(cfg.n);
    for (int i = 0; i < cfg.n; ++i)
      y[i] = cfg.beta + a_sigma * eps1[i] + a_tau * eps2[i];
    const Dataset data{points, y};

    for (std::size_t vi = 0; vi < n_nu; ++vi) {
      ReplicateOutcome& slot = outcomes[rep * n_nu + vi];
      try {
        const FitResult fit =
            fit_mle(data, KernelFamily::gaussian, cfg.nu_values[vi], cfg.fit);
        slot.status = fit.status;
        slot.beta = fit.beta_hat;
        slot.sigma = std::sqrt(fit.sigma2_hat);
        slot.psi = fit.psi_hat;
      } catch (const DegenerateData&) {
        slot.status = FitStatus::degenerate_residual;
      } catch (const AllInfeasible&) {
        slot.infeasible = true;
      }
    }
  };

  const unsigned hw = std::thread::hardware_concurrency();
  const int workers =
      cfg.max_workers > 0
          ? cfg.max_workers
          : std::max(1, static_cast<int>(std::min<unsigned>(hw ? hw : 1, 16)));
  if (workers == 1 || cfg.replicates < 4) {
    for (int rep = 0; rep < cfg.replicates; ++rep) run_replicate(rep);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int rep = w; rep < cfg.replicates; rep += workers)
          run_replicate(rep);
      });
    }
    for (auto& t : pool) t.join();
  }

  StudySummary summary;
  summary.config = cfg;
  summary.cells.resize(n_nu);
  for (std::size_t vi = 0; vi < n_nu; ++vi) {
    CellSummary& cell = summary.cells[vi];
    cell.nu = cfg.nu_values[vi];
    std::vector<double> betas, sigmas, psis;
    for (int rep = 0; rep < cfg.replicates; ++rep) {
      const ReplicateOutcome& o = outcomes[rep * n_nu + vi];
      if (o.infeasible) {
        ++cell.excluded_infeasible;
        continue;
      }
      switch (o.status) {
        case FitStatus::interior:
          ++cell.included;
          betas.push_back(o.beta);
          sigmas.push_back(o.sigma);
          psis.push_back(o.psi);
          break;
        case FitStatus::unbounded_upper: ++cell.excluded_unbounded; break;
        case FitStatus::boundary_lower: ++cell.excluded_boundary; break;
        case FitStatus::degenerate_residual: ++cell.excluded_degenerate; break;
      }
    }
    const MeanSd b = mean_sd(betas), s = mean_sd(sigmas), q = mean_sd(psis);
    cell.beta_mean = b.mean; cell.beta_sd = b.sd;
    cell.sigma_mean = s.mean; cell.sigma_sd = s.sd;
    cell.psi_mean = q.mean; cell.psi_sd = q.sd;
  }
  return summary;
}

}  // namespace gpn
