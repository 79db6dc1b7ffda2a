#pragma once

// Closed-form rate expressions with every absolute constant set to 1. Only
// their scaling in (m, r, n) is meaningful; logs are natural.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qst/basis.hpp"
#include "qst/metrics.hpp"
#include "qst/sampler.hpp"

namespace qst {

enum class RateKind { kSchatten, kHellinger, kKl };

RateKind parse_rate_kind(const std::string& text);

struct RateParams {
  std::size_t m = 0;
  double r = 1.0;
  double n = 1.0;
  /// Noise level: sigma_xi (Gaussian), U_bar (binary), U (bounded
  /// standard QST), or m^-1/2 for the Pauli basis.
  double scale = 1.0;
};

/// With tau = scale m^{3/2} / sqrt n:
///   schatten(q): (tau r^{1/q}) ^ tau^{1-1/q} ^ 1
///   hellinger, kl: (tau r) ^ 1
/// q in [1, inf]; ArgumentError otherwise or when r is outside [1, m].
double minimax_lower_rate(RateKind kind, double q, const RateParams& p);

/// Log-factor upper rates, q in [1, 2]:
///   schatten(q): (tau r^{1/q} sqrt(log m) log^{(2-q)/q}(mn))
///                ^ (tau^{1-1/q} (log m)^{1/2-1/(2q)}) ^ 2
///   hellinger:   tau r sqrt(log m) log(mn) ^ 2
///   kl:          tau r sqrt(log m) log(mn)
double upper_rate(RateKind kind, double q, const RateParams& p);

/// min(d tau^-p, m). tau must be positive.
double effective_rank(double p, double d, double tau, std::size_t m);

/// 2 [sigma_X sqrt((t + log 2m)/n) v U_X (t + log 2m)/n].
double bernstein_bound(double sigma_x, double u_x, std::size_t n, double t, std::size_t m);

/// KL divergence between the laws of n observations under rho1 and rho2,
/// with the design expectation taken exactly over the uniform basis index.
/// Gaussian: (n / 2 sigma^2) ||rho1 - rho2||_2^2 / m^2 (infinite when
/// sigma = 0 and the states differ). Binary: the exact Bernoulli sum.
/// Standard QST: n K times the per-index measurement KL, exact when every
/// element has at most two distinct eigenvalues (an upper bound otherwise).
ExtendedReal fano_kl_between_data_laws(const NoiseModel& model, const DensityMatrix& rho1,
                                       const DensityMatrix& rho2, const ObservableBasis& basis,
                                       std::size_t n);

struct FlatVectorResult {
  bool found = false;
  /// m^-1/2 (eps_1, ..., eps_m): the accepted vector, or the best one tried.
  std::vector<double> v;
  /// max |<E_k v, v>| over the checked elements, for v.
  double achieved = 0.0;
  double threshold = 0.0;
  /// Elements with |tr E_k| > (1 - gamma) U m, exempt from the check (0-based).
  std::vector<std::size_t> exempt;
  int tries = 0;
};

/// Random sign vectors until |<E_k v, v>| <= (1 - gamma/2) U for every
/// non-exempt k. gamma in (0, 1).
FlatVectorResult find_flat_vector(const ObservableBasis& basis, double gamma, int max_tries,
                                  std::uint64_t seed);

/// c1 sigma m^{3/2} (r - 1) / sqrt n. r >= 2. Callers must check kappa < 1.
double kappa_choice(double sigma, std::size_t m, std::size_t r, double n, double c1 = 0.1);

}  // namespace qst
