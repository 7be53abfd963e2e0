#include "gpn/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpn/exact_exponential.hpp"
#include "gpn/kernels.hpp"
#include "gpn/likelihood.hpp"
#include "gpn/predictor.hpp"
#include "gpn/simulation.hpp"

namespace gpn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  if (t.empty()) throw CsvFormatError(line, "empty numeric field");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw CsvFormatError(line, "not a number: '" + t + "'");
  }
  if (used != t.size())
    throw CsvFormatError(line, "trailing characters in number: '" + t + "'");
  if (!std::isfinite(v))
    throw CsvFormatError(line, "non-finite value: '" + t + "'");
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

using Row = std::vector<std::string>;

void write_csv(std::ostream& os, const Row& header, const std::vector<Row>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << csv_field(header[i]);
  os << "\n";
  for (const Row& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
}

json make_manifest(const std::string& command, const json& parameters,
                   std::optional<std::uint64_t> seed = std::nullopt) {
  json m;
  m["command"] = command;
  m["parameters"] = parameters;
  m["tool_version"] = kToolVersion;
  if (seed) m["seed"] = *seed;
  return m;
}

void write_manifest_sidecar(const fs::path& output, const json& manifest) {
  std::ofstream f(output.string() + ".manifest.json");
  f << manifest.dump(2) << "\n";
}

void emit_csv(const std::string& out_path, const Row& header,
              const std::vector<Row>& rows, const json& manifest) {
  if (out_path.empty()) {
    write_csv(std::cout, header, rows);
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw CsvFormatError(0, "cannot open output file " + out_path);
  write_csv(f, header, rows);
  write_manifest_sidecar(out_path, manifest);
}

// ---------------------------------------------------------------------------
// options shared by the dataset-consuming subcommands

struct InputOptions {
  std::string input;
  std::string model;
  int n = 0;
};

Dataset resolve_dataset(const InputOptions& in) {
  if (!in.input.empty()) return load_csv_file(in.input);
  if (!in.model.empty()) return builtin_dataset(parse_model(in.model), in.n);
  throw std::invalid_argument("provide either --input or --model/--n");
}

json input_params(const InputOptions& in) {
  json p;
  if (!in.input.empty()) {
    p["input"] = in.input;
  } else {
    p["model"] = in.model;
    p["n"] = in.n;
  }
  return p;
}

struct FitCliOptions {
  InputOptions in;
  std::string family = "exponential";
  double nu = 0.0;
  double psi_min = 1e-3, psi_max = 1e4;
  int grid = 400;
  std::string out;
};

json fit_result_json(const FitResult& r, int n) {
  json j;
  j["beta_hat"] = r.beta_hat;
  j["sigma_hat"] = std::sqrt(r.sigma2_hat);
  j["sigma2_hat"] = r.sigma2_hat;
  j["psi_hat"] = r.psi_hat;
  j["status"] = to_string(r.status);
  j["modes"] = json::array();
  for (const Mode& m : r.modes)
    j["modes"].push_back({{"psi", m.psi}, {"loglik", m.loglik}});
  if (std::isfinite(r.cond_at_psi_hat.value))
    j["cond_at_psi_hat"] = r.cond_at_psi_hat.value;
  else
    j["cond_at_psi_hat"] = "inf";
  j["cond_beyond_double_precision"] = r.cond_at_psi_hat.beyond_double_precision;
  j["nu"] = r.nu;
  j["family"] = to_string(r.family);
  j["n"] = n;
  return j;
}

int run_fit(const FitCliOptions& o) {
  const Dataset d = resolve_dataset(o.in);
  if (d.size() < 2) {
    std::cerr << "fit needs at least 2 observations\n";
    return kExitDataError;
  }
  FitOptions opts;
  opts.psi_min = o.psi_min;
  opts.psi_max = o.psi_max;
  opts.grid_size = o.grid;
  const FitResult r = fit_mle(d, parse_family(o.family), o.nu, opts);

  json params = input_params(o.in);
  params["family"] = o.family;
  params["nu"] = o.nu;
  params["psi_min"] = o.psi_min;
  params["psi_max"] = o.psi_max;
  params["grid"] = o.grid;
  if (!o.out.empty()) params["out"] = o.out;

  json j = fit_result_json(r, d.size());
  j["manifest"] = make_manifest("fit", params);
  if (o.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(o.out);
    if (!f) throw CsvFormatError(0, "cannot open output file " + o.out);
    f << j.dump(2) << "\n";
  }
  return kExitOk;
}

int run_profile(const FitCliOptions& o) {
  const Dataset d = resolve_dataset(o.in);
  if (d.size() < 2) {
    std::cerr << "profile needs at least 2 observations\n";
    return kExitDataError;
  }
  const LikelihoodProfile p = scan_profile(d, parse_family(o.family), o.nu,
                                           o.psi_min, o.psi_max, o.grid);
  std::vector<Row> rows;
  rows.reserve(p.size());
  for (int i = 0; i < p.size(); ++i)
    rows.push_back({format_double(p.psi[i]),
                    p.flag[i] == PointFlag::ok ? format_double(p.value[i]) : "",
                    to_string(p.flag[i])});

  json params = input_params(o.in);
  params["family"] = o.family;
  params["nu"] = o.nu;
  params["psi_min"] = o.psi_min;
  params["psi_max"] = o.psi_max;
  params["grid"] = o.grid;
  if (!o.out.empty()) params["out"] = o.out;
  emit_csv(o.out, {"psi", "loglik", "flag"}, rows, make_manifest("profile", params));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// figure bundles

struct FigureOptions {
  int id = 0;
  std::string out_dir = ".";
};

void profile_rows(std::vector<Row>& rows, const std::string& label_value,
                  const LikelihoodProfile& p) {
  for (int i = 0; i < p.size(); ++i)
    rows.push_back({label_value, format_double(p.psi[i]),
                    p.flag[i] == PointFlag::ok ? format_double(p.value[i]) : "",
                    to_string(p.flag[i])});
}

int run_figure(const FigureOptions& o) {
  if (o.id < 1 || o.id > 4) {
    std::cerr << "unknown figure id " << o.id << " (expected 1..4)\n";
    return kExitInputError;
  }
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  json params;
  params["id"] = o.id;
  params["out"] = o.out_dir;
  const json manifest = make_manifest("figure", params);

  auto emit = [&](const std::string& name, const Row& header,
                  const std::vector<Row>& rows) {
    const fs::path path = dir / name;
    std::ofstream f(path);
    if (!f) throw CsvFormatError(0, "cannot open output file " + path.string());
    write_csv(f, header, rows);
    write_manifest_sidecar(path, manifest);
  };

  if (o.id == 1) {
    // ML correlation length vs n, exponential kernel, both builtin models.
    // The linear model uses the closed-form equidistant engine; the sin
    // model the generic fit.
    std::vector<Row> rows;
    for (int n = 6; n <= 20; ++n)
      rows.push_back({std::to_string(n), "linear",
                      format_double(psi_hat_numeric_linear(n)), "interior"});
    for (int n = 6; n <= 20; ++n) {
      const FitResult r = fit_mle(builtin_dataset(ModelId::sine, n),
                                  KernelFamily::exponential, 0.0);
      rows.push_back({std::to_string(n), "sin", format_double(r.psi_hat),
                      to_string(r.status)});
    }
    emit("figure1_psi_vs_n.csv", {"n", "model", "psi_hat", "status"}, rows);
    return kExitOk;
  }

  if (o.id == 2) {
    // The conditioning column documents why the nugget-free gaussian fits
    // stop being reproducible in double precision as n grows.
    std::vector<Row> left;
    for (int n = 6; n <= 20; ++n) {
      const FitResult r = fit_mle(builtin_dataset(ModelId::sine, n),
                                  KernelFamily::gaussian, 0.0);
      left.push_back({std::to_string(n), format_double(r.psi_hat),
                      to_string(r.status),
                      format_double(r.cond_at_psi_hat.value),
                      r.cond_at_psi_hat.beyond_double_precision ? "1" : "0"});
    }
    emit("figure2_psi_vs_n.csv",
         {"n", "psi_hat", "status", "cond_at_psi_hat", "cond_beyond_double"},
         left);

    std::vector<Row> right;
    for (const int n : {7, 14, 20}) {
      const LikelihoodProfile p = scan_profile(
          builtin_dataset(ModelId::sine, n), KernelFamily::gaussian, 0.0,
          1e-3, 1e4, 400);
      profile_rows(right, std::to_string(n), p);
    }
    emit("figure2_profiles.csv", {"n", "psi", "loglik", "flag"}, right);
    return kExitOk;
  }

  if (o.id == 3) {
    std::vector<Row> left;
    for (const double nu : {0.02, 0.05}) {
      for (int n = 6; n <= 20; ++n) {
        const FitResult r = fit_mle(builtin_dataset(ModelId::sine, n),
                                    KernelFamily::gaussian, nu);
        left.push_back({std::to_string(n), format_double(nu),
                        format_double(r.psi_hat), to_string(r.status),
                        format_double(r.cond_at_psi_hat.value)});
      }
    }
    emit("figure3_psi_vs_n.csv",
         {"n", "nu", "psi_hat", "status", "cond_at_psi_hat"}, left);

    std::vector<Row> right;
    for (const int n : {7, 14, 20}) {
      const LikelihoodProfile p = scan_profile(
          builtin_dataset(ModelId::sine, n), KernelFamily::gaussian, 0.02,
          1e-3, 1e4, 400);
      profile_rows(right, std::to_string(n), p);
    }
    emit("figure3_profiles.csv", {"n", "psi", "loglik", "flag"}, right);
    return kExitOk;
  }

  // figure 4: the second likelihood mode appearing under a nonzero nugget
  std::vector<Row> rows;
  for (const double nu : {0.0, 0.01, 0.001, 0.0001}) {
    const LikelihoodProfile p = scan_profile(builtin_dataset(ModelId::sine, 7),
                                             KernelFamily::gaussian, nu, 1e-3,
                                             1e4, 400);
    profile_rows(rows, format_double(nu), p);
  }
  emit("figure4_profiles.csv", {"nu", "psi", "loglik", "flag"}, rows);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// table 1

struct Table1Options {
  int replicates = 1000;
  std::uint64_t seed = 12345;
  std::string convention = "std_dev";
  std::string out = "table1.csv";
};

int run_table1(const Table1Options& o) {
  SimConfig cfg;
  cfg.replicates = o.replicates;
  cfg.seed = o.seed;
  cfg.convention = parse_convention(o.convention);

  std::vector<StudySummary> studies;
  for (const double tau : {0.0, 0.01}) {
    cfg.tau = tau;
    studies.push_back(run_study(cfg));
  }

  Row header{"statistic"};
  for (const StudySummary& s : studies)
    for (const CellSummary& c : s.cells)
      header.push_back("tau=" + format_double(s.config.tau) +
                       ";nu=" + format_double(c.nu));

  auto row_of = [&](const std::string& name, auto getter) {
    Row row{name};
    for (const StudySummary& s : studies)
      for (const CellSummary& c : s.cells) row.push_back(getter(c));
    return row;
  };
  // estimator cells in the table's own "mean(sd)" shape
  auto stat = [](double mean, double sd) {
    return format_double(mean) + "(" + format_double(sd) + ")";
  };
  auto cnt = [](int v) { return std::to_string(v); };

  std::vector<Row> rows{
      row_of("beta_hat",
             [&](const CellSummary& c) { return stat(c.beta_mean, c.beta_sd); }),
      row_of("sigma_hat",
             [&](const CellSummary& c) { return stat(c.sigma_mean, c.sigma_sd); }),
      row_of("psi_hat",
             [&](const CellSummary& c) { return stat(c.psi_mean, c.psi_sd); }),
      row_of("included", [&](const CellSummary& c) { return cnt(c.included); }),
      row_of("excluded_unbounded",
             [&](const CellSummary& c) { return cnt(c.excluded_unbounded); }),
      row_of("excluded_boundary",
             [&](const CellSummary& c) { return cnt(c.excluded_boundary); }),
      row_of("excluded_degenerate",
             [&](const CellSummary& c) { return cnt(c.excluded_degenerate); }),
      row_of("excluded_infeasible",
             [&](const CellSummary& c) { return cnt(c.excluded_infeasible); }),
  };

  json params;
  params["replicates"] = o.replicates;
  params["seed"] = o.seed;
  params["amplitude_convention"] = o.convention;
  params["n"] = cfg.n;
  params["beta"] = cfg.beta;
  params["psi"] = cfg.psi;
  params["sigma"] = cfg.sigma;
  params["tau_values"] = {0.0, 0.01};
  params["nu_values"] = cfg.nu_values;
  params["sampling_jitter"] = cfg.sampling_jitter;
  params["out"] = o.out;
  emit_csv(o.out, header, rows, make_manifest("table1", params, o.seed));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

struct PredictOptions {
  InputOptions in;
  std::string family = "exponential";
  double nu = 0.0;
  std::string psi = "auto";
  std::string query;       // comma-separated points
  std::string query_grid;  // min:max:count
  std::string out;
};

std::vector<double> parse_query_points(const PredictOptions& o) {
  std::vector<double> pts;
  if (!o.query.empty()) {
    std::stringstream ss(o.query);
    std::string tok;
    while (std::getline(ss, tok, ','))
      pts.push_back(parse_number(tok, 0));
  }
  if (!o.query_grid.empty()) {
    std::stringstream ss(o.query_grid);
    std::string a, b, k;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
        !std::getline(ss, k))
      throw std::invalid_argument("--query-grid expects min:max:count");
    const double lo = parse_number(a, 0);
    const double hi = parse_number(b, 0);
    const int count = static_cast<int>(parse_number(k, 0));
    if (count < 2 || !(hi > lo))
      throw std::invalid_argument("--query-grid expects min < max, count >= 2");
    for (int i = 0; i < count; ++i)
      pts.push_back(lo + (hi - lo) * i / (count - 1));
  }
  if (pts.empty())
    throw std::invalid_argument("provide query points via --query or --query-grid");
  return pts;
}

int run_predict(const PredictOptions& o) {
  const Dataset d = resolve_dataset(o.in);
  if (d.size() < 2) {
    std::cerr << "predict needs at least 2 observations\n";
    return kExitDataError;
  }
  const KernelFamily family = parse_family(o.family);
  double psi = 0.0;
  double beta = 0.0;
  if (o.psi == "auto") {
    const FitResult r = fit_mle(d, family, o.nu);
    psi = r.psi_hat;
    beta = r.beta_hat;
  } else {
    psi = parse_number(o.psi, 0);
    beta = beta_hat(d, KernelSpec{family, psi, o.nu});
  }
  const Emulator em = build_emulator(d, KernelSpec{family, psi, o.nu}, beta);

  std::vector<Row> rows;
  for (const double x : parse_query_points(o))
    rows.push_back({format_double(x), format_double(em.predict_metamodel(x)),
                    format_double(em.predict_interpolating(x))});

  json params = input_params(o.in);
  params["family"] = o.family;
  params["nu"] = o.nu;
  params["psi"] = o.psi;
  params["resolved_psi"] = psi;
  params["resolved_beta"] = beta;
  if (!o.query.empty()) params["query"] = o.query;
  if (!o.query_grid.empty()) params["query_grid"] = o.query_grid;
  if (!o.out.empty()) params["out"] = o.out;
  emit_csv(o.out, {"x", "m_nu", "m_interp"}, rows,
           make_manifest("predict", params));
  return kExitOk;
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
  auto* input = cmd->add_option("--input", in.input, "CSV file with header x,y");
  auto* model =
      cmd->add_option("--model", in.model, "builtin model: linear | sin");
  auto* n = cmd->add_option("--n", in.n, "points of the builtin model");
  model->excludes(input);
  model->needs(n);
  n->needs(model);
}

}  // namespace

Dataset load_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw CsvFormatError(1, "empty file");
  ++lineno;
  {
    std::string h = trim(line);
    std::string squashed;
    for (const char c : h)
      if (c != ' ' && c != '\t') squashed += c;
    if (squashed != "x,y")
      throw CsvFormatError(lineno, "expected header 'x,y', got '" + h + "'");
  }
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw CsvFormatError(lineno, "expected two comma-separated fields");
    if (line.find(',', comma + 1) != std::string::npos)
      throw CsvFormatError(lineno, "expected exactly two fields");
    xs.push_back(parse_number(line.substr(0, comma), lineno));
    ys.push_back(parse_number(line.substr(comma + 1), lineno));
  }
  if (xs.empty()) throw CsvFormatError(lineno, "no observations");
  return Dataset::from_xy(std::move(xs), std::move(ys));
}

Dataset load_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CsvFormatError(0, "cannot open " + path);
  return load_csv(f);
}

int run(int argc, const char* const* argv) {
  CLI::App app{"1-D Gaussian-process maximum-likelihood toolkit with nugget "
               "support"};
  app.require_subcommand(1);

  FitCliOptions fit_opts;
  auto* fit = app.add_subcommand("fit", "ML estimation of (beta, sigma2, psi)");
  add_input_options(fit, fit_opts.in);
  fit->add_option("--family", fit_opts.family, "exponential | gaussian");
  fit->add_option("--nu", fit_opts.nu, "nugget fraction in [0,1)");
  fit->add_option("--psi-min", fit_opts.psi_min, "search lower bound");
  fit->add_option("--psi-max", fit_opts.psi_max, "search upper bound");
  fit->add_option("--grid", fit_opts.grid, "scan grid size (>= 16)");
  fit->add_option("--out", fit_opts.out, "write JSON here instead of stdout");

  FitCliOptions prof_opts;
  auto* prof = app.add_subcommand("profile", "profile log-likelihood scan");
  add_input_options(prof, prof_opts.in);
  prof->add_option("--family", prof_opts.family, "exponential | gaussian");
  prof->add_option("--nu", prof_opts.nu, "nugget fraction in [0,1)");
  prof->add_option("--psi-min", prof_opts.psi_min, "grid lower bound");
  prof->add_option("--psi-max", prof_opts.psi_max, "grid upper bound");
  prof->add_option("--grid", prof_opts.grid, "grid size (>= 16)");
  prof->add_option("--out", prof_opts.out, "write CSV here instead of stdout");

  FigureOptions fig_opts;
  auto* fig = app.add_subcommand("figure", "reproduce the data behind a figure");
  fig->add_option("id", fig_opts.id, "figure id, 1..4")->required();
  fig->add_option("--out", fig_opts.out_dir, "output directory");

  Table1Options tab_opts;
  auto* tab = app.add_subcommand("table1", "simulation study summary table");
  tab->add_option("--replicates", tab_opts.replicates, "replicates per cell");
  tab->add_option("--seed", tab_opts.seed, "RNG seed");
  tab->add_option("--amplitude-convention", tab_opts.convention,
                  "std_dev | variance");
  tab->add_option("--out", tab_opts.out, "output CSV path");

  PredictOptions pred_opts;
  auto* pred = app.add_subcommand("predict", "meta-model predictions");
  add_input_options(pred, pred_opts.in);
  pred->add_option("--family", pred_opts.family, "exponential | gaussian");
  pred->add_option("--nu", pred_opts.nu, "nugget fraction in [0,1)");
  pred->add_option("--psi", pred_opts.psi, "correlation length or 'auto'");
  pred->add_option("--query", pred_opts.query, "comma-separated query points");
  pred->add_option("--query-grid", pred_opts.query_grid,
                   "query grid as min:max:count");
  pred->add_option("--out", pred_opts.out, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (fit->parsed()) return run_fit(fit_opts);
    if (prof->parsed()) return run_profile(prof_opts);
    if (fig->parsed()) return run_figure(fig_opts);
    if (tab->parsed()) return run_table1(tab_opts);
    if (pred->parsed()) return run_predict(pred_opts);
  } catch (const CsvFormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const UnsortedPoints& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const DuplicatePoints& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const DegenerateData& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const AllInfeasible& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
  return kExitInputError;
}

}  // namespace gpn::cli
