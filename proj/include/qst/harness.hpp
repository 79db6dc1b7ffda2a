#pragma once

// Seeded Monte Carlo driver: draw a state, sample data, fit, score. Every
// (trial, n) cell derives its own seeds, so the output does not depend on
// the number of worker threads.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qst/metrics.hpp"
#include "qst/rates.hpp"
#include "qst/sampler.hpp"

namespace qst {

/// Config keys (flat "key = value" text, '#' comments, or a JSON object):
///   basis       pauli:<b> or a basis JSON path
///   state       rank:<r> | power:<p>:<d> | mixed | <state JSON path> (fixed)
///   model       qst:<K> | gaussian:<sigma> | binary:<U_bar>
///   n_grid      comma list, or a:b:x<k> (geometric) / a:b:+<k> (arithmetic)
///   trials      >= 1
///   estimators  comma subset of ls, mls, vn
///   eps         auto | <value>
///   seed        integer
///   threads     worker count (default 1)
///   out_dir     output directory (empty: $QST_OUT_DIR, then ".")
///   timing      true to record wall_seconds (otherwise written as 0)
struct ExperimentConfig {
  std::string basis = "pauli:1";
  std::string state = "rank:1";
  NoiseModel model = Gaussian{0.1};
  std::vector<std::size_t> n_grid;
  int trials = 1;
  std::vector<std::string> estimators = {"vn"};
  std::optional<double> eps;  // empty means auto
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir;
  bool timing = false;
  int max_iters = 5000;

  /// Throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string config_to_text(const ExperimentConfig& cfg);

/// "1024:16384:x2", "10:50:+10" or "64,128,256".
std::vector<std::size_t> parse_n_grid(const std::string& text);

struct ExperimentRow {
  int trial = 0;
  std::size_t m = 0;
  std::size_t r = 0;
  std::size_t n = 0;
  std::string estimator;
  double eps = 0.0;
  double err_q1 = 0.0;
  double err_q2 = 0.0;
  double hellinger_sq = 0.0;
  ExtendedReal kl_rho_to_est = ExtendedReal::finite(0.0);
  double l2_pi = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  std::vector<std::string> warnings;
};

inline constexpr const char* kCsvVersionLine = "# qst-experiment v1";
inline constexpr const char* kCsvHeader =
    "trial,m,r,n,estimator,eps,err_q1,err_q2,hellinger_sq,kl_rho_to_est,l2_pi,wall_seconds,seed";

/// Validates (ConfigError) and evaluates the feasibility guard before any
/// work; guard violations become warnings.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Warnings for violations of U sqrt(m/n) log m <= 1 and
/// U^2 sqrt(m/n) log^{5/2} m log^2 n log(mn) <= sigma at each n.
std::vector<std::string> feasibility_warnings(const ExperimentConfig& cfg, double u, std::size_t m);

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_csv(std::istream& in);

struct RateFit {
  std::string group;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::size_t points = 0;
};

struct RateFitOutput {
  std::vector<RateFit> fits;
  /// Groups skipped (too few n values, zero or infinite medians).
  std::vector<std::string> notes;
};

/// Columns: err_q1, err_q2, hellinger_sq, kl_rho_to_est, l2_pi. group_by is
/// a comma list of estimator, r, m.
RateFitOutput fit_rate(const std::vector<ExperimentRow>& rows, const std::string& column,
                       const std::string& group_by = "estimator");

/// Named numeric column; infinite KL comes back as IEEE infinity.
double row_value(const ExperimentRow& row, const std::string& column);

struct TheoryComparisonRow {
  std::string group;
  std::size_t n = 0;
  double empirical_median = 0.0;
  double theory_rate = 0.0;
  /// empirical / theory; NaN when the theory cap is active (hellinger).
  double ratio = 0.0;
};

struct TheoryComparison {
  std::vector<TheoryComparisonRow> rows;
  /// Groups whose finite ratios spread by more than 10x across the grid.
  std::vector<std::string> drifting_groups;
};

/// Against upper_rate with the config's noise scale. kind/q select the
/// column: schatten q=1 -> err_q1, q=2 -> err_q2, hellinger, kl.
TheoryComparison compare_to_theory(const ExperimentResult& result, RateKind kind, double q);

}  // namespace qst
