#include "qst/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qst/error.hpp"

namespace qst {

namespace {

constexpr int kStallWindow = 5;
constexpr int kMaxStepReductions = 60;
constexpr int kMaxOverflowHalvings = 40;
// Rounding allowance in the sufficient-decrease test.
constexpr double kArmijoSlack = 1e-15;
// exp() of anything below this relative to the top eigenvalue underflows
// (or lands below the log floor), so the iterate would lose rank.
const double kMinLogWeight = std::log(kLogEigenvalueFloor);

// Quadratic part: n^-1 [within + sum_j c_j (<S,E_j> - mean_j)^2].
double loss(const DataSummary& st, const std::vector<double>& coef) {
  if (st.n == 0) return 0.0;
  double acc = st.within_squares;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    if (st.counts[j] == 0.0) continue;
    const double r = coef[j] - st.sums[j] / st.counts[j];
    acc += st.counts[j] * r * r;
  }
  return acc / static_cast<double>(st.n);
}

double neg_entropy(const std::vector<double>& eigenvalues) {
  double acc = 0.0;
  for (double l : eigenvalues) {
    if (l > 0.0) acc += l * std::log(l);
  }
  return acc;
}

HermitianMatrix loss_gradient(const DataSummary& st, const ObservableBasis& basis,
                              const std::vector<double>& coef) {
  if (st.n == 0) return HermitianMatrix(basis.dim());
  std::vector<double> w(coef.size());
  const double f = 2.0 / static_cast<double>(st.n);
  for (std::size_t j = 0; j < coef.size(); ++j) w[j] = f * (st.counts[j] * coef[j] - st.sums[j]);
  return basis.combine(w);
}

double auto_step(const DataSummary& st) {
  const double max_count = *std::max_element(st.counts.begin(), st.counts.end());
  return static_cast<double>(st.n) / (2.0 * max_count);
}

DensityMatrix starting_point(const SolverConfig& cfg, std::size_t m) {
  if (!cfg.init) return DensityMatrix::maximally_mixed(m);
  if (cfg.init->dim() != m) throw ArgumentError("solver init: dimension mismatch");
  return *cfg.init;
}

struct Tracker {
  const SolverConfig& cfg;
  int stall = 0;

  // True when the run should stop as converged.
  bool update(double previous, double current, double gradient_mapping) {
    if (gradient_mapping < cfg.tol_gradient) return true;
    const double rel = (previous - current) / std::max(std::abs(previous), 1e-300);
    stall = rel < cfg.tol_objective ? stall + 1 : 0;
    return stall >= kStallWindow;
  }
};

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 0) throw ArgumentError("SolverConfig: max_iters must be >= 0");
  if (eta < 0.0) throw ArgumentError("SolverConfig: eta must be > 0 (or 0 for automatic)");
  if (!(beta > 0.0 && beta < 1.0)) throw ArgumentError("SolverConfig: beta must lie in (0, 1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ArgumentError("SolverConfig: c must lie in (0, 1)");
  if (!(tol_objective > 0.0) || !(tol_gradient > 0.0)) {
    throw ArgumentError("SolverConfig: tolerances must be positive");
  }
}

double objective_value(const DataSummary& stats, const ObservableBasis& basis,
                       const DensityMatrix& s, double eps) {
  if (s.dim() != basis.dim()) throw ArgumentError("objective_value: dimension mismatch");
  double value = loss(stats, basis.coefficients(s.matrix()));
  if (eps != 0.0) value += eps * neg_entropy(s.eigenvalues());
  return value;
}

double objective_value(const Dataset& data, const ObservableBasis& basis, const DensityMatrix& s,
                       double eps) {
  return objective_value(summarize(data, basis), basis, s, eps);
}

HermitianMatrix objective_gradient(const DataSummary& stats, const ObservableBasis& basis,
                                   const DensityMatrix& s, double eps) {
  HermitianMatrix g = loss_gradient(stats, basis, basis.coefficients(s.matrix()));
  if (eps != 0.0) {
    HermitianMatrix log_s = apply_spectral_fn(s.eigen(), SpectralFunction::kLog);
    log_s += HermitianMatrix::identity(s.dim());
    g.add_scaled(eps, log_s);
  }
  return g;
}

FitReport least_squares(const Dataset& data, const ObservableBasis& basis, const SolverConfig& cfg) {
  cfg.validate();
  const DataSummary st = summarize(data, basis);
  FitReport report;
  report.estimate = starting_point(cfg, basis.dim());
  if (st.n == 0) {
    report.objective_trace = {0.0};
    report.converged = true;
    report.min_eigenvalue = report.estimate.min_eigenvalue();
    return report;
  }

  const double eta0 = cfg.eta > 0.0 ? cfg.eta : auto_step(st);
  double eta = eta0;
  DensityMatrix s = report.estimate;
  std::vector<double> coef = basis.coefficients(s.matrix());
  double f = loss(st, coef);
  report.objective_trace.push_back(f);
  Tracker tracker{cfg};

  for (int it = 0; it < cfg.max_iters; ++it) {
    const HermitianMatrix g = loss_gradient(st, basis, coef);
    DensityMatrix next;
    std::vector<double> next_coef;
    double next_f = 0.0;
    double step_norm = 0.0;
    bool accepted = false;
    for (int k = 0; k <= kMaxStepReductions; ++k) {
      HermitianMatrix trial = s.matrix();
      trial.add_scaled(-eta, g);
      next = project_to_spectahedron(trial);
      const HermitianMatrix d = next.matrix() - s.matrix();
      next_coef = basis.coefficients(next.matrix());
      next_f = loss(st, next_coef);
      step_norm = d.frobenius();
      if (cfg.step_rule == StepRule::kFixed ||
          next_f <= f + cfg.armijo_c * hs_inner(g, d) + kArmijoSlack * (1.0 + f)) {
        accepted = true;
        break;
      }
      eta *= cfg.beta;
    }
    report.iterations = it + 1;
    if (!accepted) {
      // Nothing descends any more; stationary up to rounding if the step is tiny.
      report.converged = step_norm <= 1e-12;
      break;
    }
    const double previous = f;
    s = std::move(next);
    coef = std::move(next_coef);
    f = next_f;
    report.objective_trace.push_back(f);
    if (tracker.update(previous, f, step_norm / eta)) {
      report.converged = true;
      break;
    }
    if (cfg.step_rule == StepRule::kBacktracking) eta = std::min(eta / cfg.beta, 1e6 * eta0);
  }
  report.estimate = std::move(s);
  report.min_eigenvalue = report.estimate.min_eigenvalue();
  return report;
}

DensityMatrix modified_least_squares(const Dataset& data, const ObservableBasis& basis) {
  if (data.size() == 0) throw ArgumentError("modified_least_squares: empty dataset");
  const double m = static_cast<double>(basis.dim());
  return project_to_spectahedron(weighted_basis_sum(data, basis, m * m));
}

FitReport vn_penalized(const Dataset& data, const ObservableBasis& basis, double eps,
                       const SolverConfig& cfg) {
  cfg.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("vn_penalized: eps must be > 0");
  const DataSummary st = summarize(data, basis);
  const std::size_t m = basis.dim();

  DensityMatrix s = starting_point(cfg, m);
  if (!(s.min_eigenvalue() > 0.0)) {
    // Mirror descent needs an interior start.
    s = smooth_state(s, 1e-3);
  }
  // log S in the eigenbasis of S: V diag(log lambda) V*.
  std::vector<double> log_w(m);
  for (std::size_t k = 0; k < m; ++k) log_w[k] = std::log(s.eigenvalues()[k]);
  HermitianMatrix log_s = congruence(s.eigen().eigenvectors, log_w);

  std::vector<double> coef = basis.coefficients(s.matrix());
  double f = loss(st, coef) + eps * neg_entropy(s.eigenvalues());

  FitReport report;
  report.objective_trace.push_back(f);
  const double eta0 = cfg.eta > 0.0 ? cfg.eta : (st.n == 0 ? 1.0 / eps : auto_step(st));
  double eta = eta0;
  Tracker tracker{cfg};
  int overflow_halvings = 0;
  bool failed = false;

  for (int it = 0; it < cfg.max_iters && !failed; ++it) {
    HermitianMatrix g = loss_gradient(st, basis, coef);
    g.add_scaled(eps, log_s);  // the +eps*I part cancels in the normalization

    DensityMatrix next;
    HermitianMatrix next_log;
    std::vector<double> next_coef;
    double next_f = 0.0;
    double step_norm = 0.0;
    bool accepted = false;
    int reductions = 0;
    while (!accepted) {
      HermitianMatrix y = log_s;
      y.add_scaled(-eta, g);
      const EigenDecomposition eig = eigh(y);
      const double top = eig.eigenvalues.front();
      std::vector<double> shifted(m);
      double z = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        shifted[k] = eig.eigenvalues[k] - top;
        z += std::exp(shifted[k]);
      }
      const double log_z = std::log(z);
      bool representable = std::isfinite(log_z);
      std::vector<double> w(m);
      for (std::size_t k = 0; k < m && representable; ++k) {
        shifted[k] -= log_z;
        w[k] = std::exp(shifted[k]);
        representable = std::isfinite(shifted[k]) && shifted[k] > kMinLogWeight;
      }
      if (!representable) {
        if (++overflow_halvings > kMaxOverflowHalvings) {
          failed = true;
          break;
        }
        eta *= 0.5;
        continue;
      }
      next = density_from_spectrum(eig.eigenvectors, w);
      next_log = congruence(next.eigen().eigenvectors, shifted);
      next_coef = basis.coefficients(next.matrix());
      next_f = loss(st, next_coef) + eps * neg_entropy(next.eigenvalues());
      const HermitianMatrix d = next.matrix() - s.matrix();
      step_norm = d.frobenius();
      if (cfg.step_rule == StepRule::kFixed ||
          next_f <= f + cfg.armijo_c * hs_inner(g, d) + kArmijoSlack * (1.0 + std::abs(f))) {
        accepted = true;
      } else if (++reductions > kMaxStepReductions) {
        break;
      } else {
        eta *= cfg.beta;
      }
    }
    report.iterations = it + 1;
    if (failed) break;
    if (!accepted) {
      report.converged = step_norm <= 1e-12;
      break;
    }
    const double previous = f;
    s = std::move(next);
    log_s = std::move(next_log);
    coef = std::move(next_coef);
    f = next_f;
    report.objective_trace.push_back(f);
    if (tracker.update(previous, f, step_norm / eta)) {
      report.converged = true;
      break;
    }
    if (cfg.step_rule == StepRule::kBacktracking) eta = std::min(eta / cfg.beta, 1e6 * eta0);
  }
  report.estimate = std::move(s);
  report.min_eigenvalue = report.estimate.min_eigenvalue();
  return report;
}

double epsilon_choice(const NoiseModel& model, double u, std::size_t m, std::size_t n, double t,
                      const EpsilonOptions& options) {
  if (m < 2) throw ArgumentError("epsilon_choice: m must be >= 2");
  if (n < 1) throw ArgumentError("epsilon_choice: n must be >= 1");
  validate_model(model);
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double log_mn = std::log(md * nd);
  const double log_2m = std::log(2.0 * md);

  if (const auto* g = std::get_if<Gaussian>(&model)) {
    if (options.rule == EpsilonRule::kSimplified) {
      return options.D1 * g->sigma_xi / log_mn * std::sqrt(log_2m / (nd * md));
    }
    const double first = options.D1 * g->sigma_xi / log_mn * std::sqrt((t + log_2m) / (nd * md));
    const double lm = std::log(md);
    const double ln = std::log(nd);
    const double second = options.D * u * u * (t + lm * lm * lm * ln * ln) / nd;
    return std::max(first, second);
  }
  const double bound = std::holds_alternative<BoundedBinary>(model)
                           ? std::get<BoundedBinary>(model).u_bar
                           : u;
  const double a = bound * std::sqrt(log_2m / (nd * md));
  const double b = bound * bound * log_2m / nd;
  return options.D1 * std::max(a, b) / log_mn;
}

}  // namespace qst
