#pragma once

// Constrained least squares, its closed-form "modified" variant, and least
// squares with a von Neumann entropy penalty. All three optimize over the
// spectahedron; logarithms are natural.

#include <cstddef>
#include <optional>
#include <vector>

#include "qst/basis.hpp"
#include "qst/sampler.hpp"
#include "qst/state.hpp"

namespace qst {

enum class StepRule { kFixed, kBacktracking };

struct SolverConfig {
  int max_iters = 5000;
  StepRule step_rule = StepRule::kBacktracking;
  /// Fixed step size, or the first trial step for backtracking. Zero means
  /// automatic: the inverse Lipschitz constant of the loss gradient.
  double eta = 0.0;
  double beta = 0.5;
  double armijo_c = 1e-4;
  /// Stop after 5 consecutive iterations with relative objective decrease below this.
  double tol_objective = 1e-10;
  /// Or when the gradient-mapping norm drops below this.
  double tol_gradient = 1e-9;
  /// Starting point; the maximally mixed state when empty.
  std::optional<DensityMatrix> init;

  /// Throws ArgumentError on non-positive tolerances or step parameters.
  void validate() const;
};

struct FitReport {
  DensityMatrix estimate;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  double min_eigenvalue = 0.0;
};

/// n^-1 sum (Y_i - <S, X_i>)^2 + eps tr(S log S), with 0 log 0 = 0. An
/// empty dataset contributes zero loss.
double objective_value(const Dataset& data, const ObservableBasis& basis, const DensityMatrix& s,
                       double eps);
double objective_value(const DataSummary& stats, const ObservableBasis& basis,
                       const DensityMatrix& s, double eps);

/// Gradient of the objective on the Hermitian space. With eps > 0, S must
/// be full rank (DomainError otherwise).
HermitianMatrix objective_gradient(const DataSummary& stats, const ObservableBasis& basis,
                                   const DensityMatrix& s, double eps);

/// Projected gradient descent. Hitting max_iters returns converged = false.
FitReport least_squares(const Dataset& data, const ObservableBasis& basis,
                        const SolverConfig& cfg = {});

/// Projection of (m^2/n) sum Y_i X_i onto the spectahedron. Throws
/// ArgumentError on an empty dataset.
DensityMatrix modified_least_squares(const Dataset& data, const ObservableBasis& basis);

/// Entropy mirror descent; iterates stay full rank. eps must be > 0.
FitReport vn_penalized(const Dataset& data, const ObservableBasis& basis, double eps,
                       const SolverConfig& cfg = {});

enum class EpsilonRule {
  /// Gaussian: D1 sigma / log(mn) * sqrt(log(2m)/(nm)).
  /// Bounded: (1/log(mn)) [U sqrt(log(2m)/(nm)) v U^2 log(2m)/n].
  kSimplified,
  /// Gaussian only: adds t and the second-order term
  /// D U^2 (t + log^3 m log^2 n)/n. Bounded models ignore the flag.
  kFull,
};

/// The absolute constants are unknown; D and D1 default to 1 and only the
/// scaling in (m, n) is meaningful.
struct EpsilonOptions {
  EpsilonRule rule = EpsilonRule::kSimplified;
  double D = 1.0;
  double D1 = 1.0;
};

/// Regularization level for vn_penalized. Bounded models (standard QST and
/// binary) use the bound on |Y|: U for standard QST, U_bar for binary.
double epsilon_choice(const NoiseModel& model, double u, std::size_t m, std::size_t n, double t,
                      const EpsilonOptions& options = {});

}  // namespace qst
