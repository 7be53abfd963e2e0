#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpn/cli.hpp"
#include "gpn/exact_exponential.hpp"
#include "gpn/kernels.hpp"
#include "gpn/likelihood.hpp"
#include "gpn/predictor.hpp"
#include "gpn/simulation.hpp"

namespace py = pybind11;
using namespace gpn;

namespace {

Dataset dataset_of(std::vector<double> x, std::vector<double> y) {
  return Dataset::from_xy(std::move(x), std::move(y));
}

py::dict fit_to_dict(const FitResult& r) {
  py::dict d;
  d["beta_hat"] = r.beta_hat;
  d["sigma2_hat"] = r.sigma2_hat;
  d["sigma_hat"] = std::sqrt(r.sigma2_hat);
  d["psi_hat"] = r.psi_hat;
  d["status"] = to_string(r.status);
  py::list modes;
  for (const Mode& m : r.modes) modes.append(py::make_tuple(m.psi, m.loglik));
  d["modes"] = modes;
  d["cond_at_psi_hat"] = r.cond_at_psi_hat.value;
  d["cond_beyond_double_precision"] = r.cond_at_psi_hat.beyond_double_precision;
  d["nu"] = r.nu;
  d["family"] = to_string(r.family);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "1-D Gaussian-process maximum-likelihood toolkit with nugget support";

  m.def(
      "corr",
      [](const std::string& family, double psi, double x, double x2) {
        return corr(KernelSpec{parse_family(family), psi, 0.0}, x, x2);
      },
      py::arg("family"), py::arg("psi"), py::arg("x"), py::arg("x2"),
      "Nugget-free correlation r(x, x2)");

  m.def(
      "corr_matrix",
      [](const std::string& family, double psi, double nu,
         const std::vector<double>& points) {
        const SymMatrix r = corr_matrix(KernelSpec{parse_family(family), psi, nu},
                                        points);
        std::vector<std::vector<double>> out(r.size(),
                                             std::vector<double>(r.size()));
        for (int i = 0; i < r.size(); ++i)
          for (int j = 0; j < r.size(); ++j) out[i][j] = r(i, j);
        return out;
      },
      py::arg("family"), py::arg("psi"), py::arg("nu"), py::arg("points"),
      "Correlation matrix (1-nu) R + nu I");

  m.def(
      "condition_number",
      [](const std::string& family, double psi, double nu,
         const std::vector<double>& points) {
        const ConditionNumber c = condition_number(
            corr_matrix(KernelSpec{parse_family(family), psi, nu}, points));
        return py::make_tuple(c.value, c.beyond_double_precision);
      },
      py::arg("family"), py::arg("psi"), py::arg("nu"), py::arg("points"),
      "(condition number, beyond-double-precision flag) of the correlation "
      "matrix");

  m.def(
      "fit_mle",
      [](const std::vector<double>& x, const std::vector<double>& y,
         const std::string& family, double nu, double psi_min, double psi_max,
         int grid) {
        FitOptions opts;
        opts.psi_min = psi_min;
        opts.psi_max = psi_max;
        opts.grid_size = grid;
        return fit_to_dict(fit_mle(dataset_of(x, y), parse_family(family), nu,
                                   opts));
      },
      py::arg("x"), py::arg("y"), py::arg("family"), py::arg("nu") = 0.0,
      py::arg("psi_min") = 1e-3, py::arg("psi_max") = 1e4,
      py::arg("grid") = 400,
      "Two-stage ML fit; returns a dict mirroring the CLI's JSON output");

  m.def(
      "scan_profile",
      [](const std::vector<double>& x, const std::vector<double>& y,
         const std::string& family, double nu, double psi_min, double psi_max,
         int grid) {
        const LikelihoodProfile p = scan_profile(
            dataset_of(x, y), parse_family(family), nu, psi_min, psi_max, grid);
        std::vector<std::string> flags;
        flags.reserve(p.flag.size());
        for (const PointFlag f : p.flag) flags.push_back(to_string(f));
        return py::make_tuple(p.psi, p.value, flags);
      },
      py::arg("x"), py::arg("y"), py::arg("family"), py::arg("nu") = 0.0,
      py::arg("psi_min") = 1e-3, py::arg("psi_max") = 1e4,
      py::arg("grid") = 400,
      "(psi grid, profile values, flags); values are NaN where flagged");

  m.def("psi_hat_expansion", &psi_hat_expansion, py::arg("n"),
        "n/2 - 7/6 - 7/(18n) - 17/(54 n^2)");
  m.def("psi_hat_numeric_linear", &psi_hat_numeric_linear, py::arg("n"),
        "Numeric ML correlation length of the equidistant linear model");

  m.def(
      "builtin_dataset",
      [](const std::string& model, int n) {
        const Dataset d = builtin_dataset(parse_model(model), n);
        return py::make_tuple(d.x, d.y);
      },
      py::arg("model"), py::arg("n"), "(x, y) of a builtin model");

  py::class_<Emulator>(m, "Emulator")
      .def(py::init([](const std::vector<double>& x,
                       const std::vector<double>& y, const std::string& family,
                       double psi, double nu, double beta) {
             return Emulator(dataset_of(x, y),
                             KernelSpec{parse_family(family), psi, nu}, beta);
           }),
           py::arg("x"), py::arg("y"), py::arg("family"), py::arg("psi"),
           py::arg("nu"), py::arg("beta"))
      .def("predict_metamodel", &Emulator::predict_metamodel, py::arg("x"))
      .def("predict_interpolating", &Emulator::predict_interpolating,
           py::arg("x"))
      .def_property_readonly("beta", &Emulator::beta)
      .def_property_readonly("deviations", [](const Emulator& e) {
        return std::vector<double>(e.deviations().begin(), e.deviations().end());
      });

  m.def(
      "run_study",
      [](int replicates, std::uint64_t seed, const std::string& convention,
         double tau, const std::vector<double>& nu_values, int n, double beta,
         double psi, double sigma) {
        SimConfig cfg;
        cfg.replicates = replicates;
        cfg.seed = seed;
        cfg.convention = parse_convention(convention);
        cfg.tau = tau;
        cfg.nu_values = nu_values;
        cfg.n = n;
        cfg.beta = beta;
        cfg.psi = psi;
        cfg.sigma = sigma;
        StudySummary s;
        {
          py::gil_scoped_release release;
          s = run_study(cfg);
        }
        py::list cells;
        for (const CellSummary& c : s.cells) {
          py::dict d;
          d["nu"] = c.nu;
          d["included"] = c.included;
          d["excluded_unbounded"] = c.excluded_unbounded;
          d["excluded_boundary"] = c.excluded_boundary;
          d["excluded_degenerate"] = c.excluded_degenerate;
          d["excluded_infeasible"] = c.excluded_infeasible;
          d["beta_mean"] = c.beta_mean;
          d["beta_sd"] = c.beta_sd;
          d["sigma_mean"] = c.sigma_mean;
          d["sigma_sd"] = c.sigma_sd;
          d["psi_mean"] = c.psi_mean;
          d["psi_sd"] = c.psi_sd;
          cells.append(d);
        }
        return cells;
      },
      py::arg("replicates") = 1000, py::arg("seed") = 12345,
      py::arg("convention") = "std_dev", py::arg("tau") = 0.0,
      py::arg("nu_values") = std::vector<double>{0.0, 0.01, 0.02},
      py::arg("n") = 8, py::arg("beta") = 2.0, py::arg("psi") = 1.5,
      py::arg("sigma") = 1.0,
      "Simulation study for one tau; returns one summary dict per nu");

  m.attr("__version__") = gpn::cli::kToolVersion;
}
