// qst: command-line front end. Subcommands simulate, estimate, distance,
// rates, validate-basis, experiment and fit-rate. Exit code 0 on success,
// 1 on a library error, 2 on bad usage.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qst/error.hpp"
#include "qst/estimators.hpp"
#include "qst/harness.hpp"
#include "qst/metrics.hpp"
#include "qst/rates.hpp"
#include "qst/rng.hpp"
#include "qst/sampler.hpp"
#include "qst/serialize.hpp"

namespace {

using namespace qst;

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ':')) out.push_back(item);
  return out;
}

// haar:m:r, power:m:p:d, mixed:m, or a state JSON path.
DensityMatrix make_state(const std::string& spec, std::uint64_t seed) {
  const auto p = split_colon(spec);
  try {
    if (p[0] == "haar" && p.size() == 3) return haar_random_state(std::stoul(p[1]), std::stoul(p[2]), seed);
    if (p[0] == "power" && p.size() == 4) {
      return power_law_state(std::stoul(p[1]), std::stod(p[2]), std::stod(p[3]), seed);
    }
    if (p[0] == "mixed" && p.size() == 2) return DensityMatrix::maximally_mixed(std::stoul(p[1]));
  } catch (const std::logic_error&) {
    throw ArgumentError("state spec '" + spec + "': malformed number");
  }
  if (p[0] == "haar" || p[0] == "power" || p[0] == "mixed") {
    throw ArgumentError("state spec '" + spec + "': expected haar:m:r, power:m:p:d or mixed:m");
  }
  return density_from_json(read_json_file(spec));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json extended_json(const ExtendedReal& x) {
  return x.is_infinite() ? Json("inf") : Json(x.value());
}

int cmd_simulate(const std::string& state_spec, const std::string& basis_spec,
                 const std::string& model_spec, std::size_t n, std::uint64_t seed,
                 const std::string& out, const std::string& state_out) {
  const ObservableBasis basis = load_basis(basis_spec);
  const DensityMatrix rho = make_state(state_spec, derive_seed(seed, {0x5354ULL}));
  const Dataset data = sample_dataset(rho, basis, parse_model(model_spec), n, seed);
  write_dataset(out, data);
  if (!state_out.empty()) write_json_file(state_out, to_json(rho));
  std::cerr << "wrote " << n << " records to " << out << "\n";
  return 0;
}

int cmd_estimate(const std::string& data_path, const std::string& estimator,
                 const std::string& eps_text, const std::string& out, const std::string& report_path,
                 int max_iters) {
  const Dataset data = read_dataset(data_path);
  const ObservableBasis basis = load_basis(data.basis_label);
  SolverConfig cfg;
  cfg.max_iters = max_iters;
  Json report{{"estimator", estimator}, {"n", data.size()}, {"m", data.m}};
  DensityMatrix est;
  if (estimator == "ls") {
    const FitReport r = least_squares(data, basis, cfg);
    est = r.estimate;
    report["iterations"] = r.iterations;
    report["converged"] = r.converged;
    report["objective"] = r.objective_trace.back();
  } else if (estimator == "mls") {
    est = modified_least_squares(data, basis);
    report["objective"] = objective_value(data, basis, est, 0.0);
  } else if (estimator == "vn") {
    const double eps = eps_text == "auto" ? epsilon_choice(data.model, basis.u(), data.m, data.size(), 0.0)
                                          : std::stod(eps_text);
    if (!(eps > 0.0)) throw ConfigError("eps resolves to " + fmt(eps) + "; vn needs eps > 0");
    const FitReport r = vn_penalized(data, basis, eps, cfg);
    est = r.estimate;
    report["eps"] = eps;
    report["iterations"] = r.iterations;
    report["converged"] = r.converged;
    report["objective"] = r.objective_trace.back();
  } else {
    throw ArgumentError("unknown estimator '" + estimator + "'");
  }
  report["min_eigenvalue"] = est.min_eigenvalue();
  write_json_file(out, to_json(est));
  if (!report_path.empty()) write_json_file(report_path, report);
  else std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_distance(const std::string& a_path, const std::string& b_path) {
  const DensityMatrix a = density_from_json(read_json_file(a_path));
  const DensityMatrix b = density_from_json(read_json_file(b_path));
  const InequalityReport ineq = check_distance_inequalities(a, b);
  Json j{{"schatten_1", schatten_distance(a, b, 1.0)},
         {"schatten_2", schatten_distance(a, b, 2.0)},
         {"schatten_inf", schatten_distance(a, b, kInfinity)},
         {"hellinger_sq", bures_hellinger_sq(a, b)},
         {"kl_ab", extended_json(quantum_kl(a, b))},
         {"kl_ba", extended_json(quantum_kl(b, a))},
         {"kl_symmetrized", extended_json(quantum_kl(a, b, true))},
         {"l2_pi", l2_pi_distance(a.matrix(), b.matrix(), a.dim())},
         {"inequalities_hold", ineq.holds()}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct RatesArgs {
  std::string theorem = "thm1";
  std::string kind = "schatten";
  double q = 1.0;
  std::size_t m = 2;
  double r = 1.0;
  double sigma = -1.0;
  double u = -1.0;
  double u_bar = -1.0;
  std::string n_grid = "1024:65536:x2";
};

int cmd_rates(const RatesArgs& a) {
  const RateKind kind = parse_rate_kind(a.kind);
  bool upper = false;
  double scale = -1.0;
  const std::string& t = a.theorem;
  if (t == "thm1" || t == "lower-gaussian") scale = a.sigma;
  else if (t == "thm2" || t == "lower-binary") scale = a.u_bar;
  else if (t == "thm3" || t == "lower-bounded") scale = a.u;
  else if (t == "thm4" || t == "lower-pauli") scale = 1.0 / std::sqrt(static_cast<double>(a.m));
  else if (t == "thm7" || t == "upper-gaussian") { scale = a.sigma; upper = true; }
  else if (t == "thm8" || t == "upper-bounded") { scale = a.u; upper = true; }
  else throw ArgumentError("unknown theorem '" + t + "'");
  if (scale < 0.0) throw ArgumentError("theorem '" + t + "' needs its noise scale (--sigma, --u or --u-bar)");
  std::cout << "n,rate\n";
  for (std::size_t n : parse_n_grid(a.n_grid)) {
    const RateParams p{a.m, a.r, static_cast<double>(n), scale};
    const double rate = upper ? upper_rate(kind, a.q, p) : minimax_lower_rate(kind, a.q, p);
    std::cout << n << "," << fmt(rate) << "\n";
  }
  return 0;
}

int cmd_validate_basis(const std::string& spec, double gamma) {
  ObservableBasis basis = spec.rfind("pauli:", 0) == 0 ? load_basis(spec)
                                                        : basis_from_json(read_json_file(spec), spec);
  const ValidationReport r = validate_basis(basis, gamma);
  Json j{{"label", basis.label()},
         {"element_count", r.element_count},
         {"expected_count", r.expected_count},
         {"max_orthonormality_deviation", r.max_orthonormality_deviation},
         {"measured_u", r.measured_u},
         {"gamma", r.gamma},
         {"trace_violators", r.trace_violators},
         {"orthonormal", r.orthonormal()}};
  std::cout << j.dump(2) << "\n";
  return r.orthonormal() ? 0 : 1;
}

int cmd_experiment(const std::string& config_path, std::uint64_t seed, int threads,
                   const std::string& out_dir, bool timing, const std::string& out_name) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  cfg.seed = seed;
  if (threads > 0) cfg.threads = threads;
  if (timing) cfg.timing = true;
  if (!out_dir.empty()) {
    cfg.out_dir = out_dir;
  } else if (cfg.out_dir.empty()) {
    const char* env = std::getenv("QST_OUT_DIR");
    cfg.out_dir = env != nullptr && *env != '\0' ? env : ".";
  }
  const ExperimentResult result = run_experiment(cfg);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path csv = std::filesystem::path(cfg.out_dir) / out_name;
  std::ofstream out(csv);
  if (!out) throw ArgumentError("cannot write '" + csv.string() + "'");
  write_csv(out, result.rows);
  std::ofstream echo(csv.string() + ".config");
  echo << config_to_text(cfg);
  std::cerr << "wrote " << result.rows.size() << " rows to " << csv.string() << "\n";
  return 0;
}

int cmd_fit_rate(const std::string& path, const std::string& column, const std::string& group_by) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  const RateFitOutput fit = fit_rate(read_csv(in), column, group_by);
  std::cout << "group,slope,intercept,stderr,points\n";
  for (const auto& f : fit.fits) {
    std::cout << '"' << f.group << "\"," << fmt(f.slope) << ',' << fmt(f.intercept) << ','
              << fmt(f.stderr_slope) << ',' << f.points << "\n";
  }
  for (const auto& note : fit.notes) std::cerr << "note: " << note << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum state tomography by trace regression"};
  app.require_subcommand(1);

  std::string state_spec, basis_spec, model_spec, out, state_out;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  auto* sim = app.add_subcommand("simulate", "Sample a dataset from a state");
  sim->add_option("--state", state_spec, "haar:m:r, power:m:p:d, mixed:m or a state JSON")->required();
  sim->add_option("--basis", basis_spec, "pauli:b or a basis JSON")->required();
  sim->add_option("--model", model_spec, "qst:K, gaussian:sigma or binary:U_bar")->required();
  sim->add_option("--n", n, "Number of records")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "RNG seed")->required();
  sim->add_option("--out", out, "Output CSV (sidecar written to <out>.json)")->required();
  sim->add_option("--state-out", state_out, "Also write the true state as JSON");

  std::string data_path, estimator = "vn", eps_text = "auto", report_path;
  int max_iters = 5000;
  auto* est = app.add_subcommand("estimate", "Fit a density matrix to a dataset");
  est->add_option("--data", data_path, "Dataset CSV")->required();
  est->add_option("--estimator", estimator, "ls, mls or vn")->check(CLI::IsMember({"ls", "mls", "vn"}));
  est->add_option("--eps", eps_text, "auto or a positive value (vn only)");
  est->add_option("--out", out, "Output state JSON")->required();
  est->add_option("--report", report_path, "Fit report JSON (stdout when omitted)");
  est->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);

  std::string a_path, b_path;
  bool all = true;
  auto* dist = app.add_subcommand("distance", "All distances between two states");
  dist->add_option("--a", a_path, "First state JSON")->required();
  dist->add_option("--b", b_path, "Second state JSON")->required();
  dist->add_flag("--all", all, "Print every metric (the default)");

  RatesArgs ra;
  auto* rates = app.add_subcommand("rates", "Evaluate a rate formula over an n grid");
  rates->add_option("--theorem", ra.theorem, "thm1, thm2, thm3, thm4, thm7, thm8");
  rates->add_option("--kind", ra.kind, "schatten, hellinger or kl");
  rates->add_option("--q", ra.q, "Schatten index");
  rates->add_option("--m", ra.m, "Dimension")->required();
  rates->add_option("--r", ra.r, "Rank");
  rates->add_option("--sigma", ra.sigma, "Gaussian noise level");
  rates->add_option("--u", ra.u, "Operator-norm bound U");
  rates->add_option("--u-bar", ra.u_bar, "Binary response level");
  rates->add_option("--n-grid", ra.n_grid, "a:b:x<k>, a:b:+<k> or a comma list");

  double gamma = 0.5;
  auto* vb = app.add_subcommand("validate-basis", "Audit a basis for orthonormality and norms");
  vb->add_option("--basis,--file", basis_spec, "pauli:b or a basis JSON")->required();
  vb->add_option("--gamma", gamma, "Trace condition parameter");

  std::string config_path, out_dir, out_name = "experiment.csv";
  int threads = 0;
  bool timing = false;
  auto* exp = app.add_subcommand("experiment", "Run a seeded Monte Carlo experiment");
  exp->add_option("--config", config_path, "Config file (key = value or JSON)")->required();
  exp->add_option("--seed", seed, "Master seed")->required();
  exp->add_option("--threads", threads, "Worker threads (overrides config)");
  exp->add_option("--out-dir", out_dir, "Output directory (default: config, then $QST_OUT_DIR)");
  exp->add_option("--out", out_name, "CSV file name inside the output directory");
  exp->add_flag("--timing", timing, "Record wall-clock seconds (makes output non-reproducible)");

  std::string results, column = "err_q2", group_by = "estimator";
  auto* fr = app.add_subcommand("fit-rate", "Log-log slope of median error against n");
  fr->add_option("--results", results, "Experiment CSV")->required();
  fr->add_option("--column", column, "Error column");
  fr->add_option("--group-by", group_by, "Comma list of estimator, r, m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; everything else is a usage error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) return cmd_simulate(state_spec, basis_spec, model_spec, n, seed, out, state_out);
    if (*est) return cmd_estimate(data_path, estimator, eps_text, out, report_path, max_iters);
    if (*dist) return cmd_distance(a_path, b_path);
    if (*rates) return cmd_rates(ra);
    if (*vb) return cmd_validate_basis(basis_spec, gamma);
    if (*exp) return cmd_experiment(config_path, seed, threads, out_dir, timing, out_name);
    if (*fr) return cmd_fit_rate(results, column, group_by);
  } catch (const qst::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
