#include "qst/rates.hpp"

#include <algorithm>
#include <cmath>

#include "qst/error.hpp"
#include "qst/rng.hpp"

namespace qst {

namespace {

double tau_of(const RateParams& p) {
  if (p.m < 1) throw ArgumentError("rate: m must be >= 1");
  if (!(p.n > 0.0)) throw ArgumentError("rate: n must be > 0");
  if (!(p.r >= 1.0 && p.r <= static_cast<double>(p.m))) {
    throw ArgumentError("rate: r must lie in [1, m]");
  }
  if (!(p.scale >= 0.0)) throw ArgumentError("rate: scale must be >= 0");
  return p.scale * std::pow(static_cast<double>(p.m), 1.5) / std::sqrt(p.n);
}

// a log(a/b) with the 0 log 0 = 0 convention; infinite if b = 0 < a.
ExtendedReal bernoulli_term(double a, double b) {
  if (a <= 0.0) return ExtendedReal::finite(0.0);
  if (b <= 0.0) return ExtendedReal::infinite();
  return ExtendedReal::finite(a * std::log(a / b));
}

ExtendedReal discrete_kl(const std::vector<Outcome>& p, const std::vector<Outcome>& q) {
  ExtendedReal total = ExtendedReal::finite(0.0);
  for (std::size_t k = 0; k < p.size(); ++k) total = total + bernoulli_term(p[k].probability, q[k].probability);
  return total;
}

}  // namespace

RateKind parse_rate_kind(const std::string& text) {
  if (text == "schatten") return RateKind::kSchatten;
  if (text == "hellinger") return RateKind::kHellinger;
  if (text == "kl") return RateKind::kKl;
  throw ArgumentError("unknown rate kind '" + text + "' (expected schatten, hellinger or kl)");
}

double minimax_lower_rate(RateKind kind, double q, const RateParams& p) {
  const double tau = tau_of(p);
  if (kind != RateKind::kSchatten) return std::min(tau * p.r, 1.0);
  if (!(q >= 1.0)) throw ArgumentError("minimax_lower_rate: q must lie in [1, inf]");
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  return std::min({tau * std::pow(p.r, inv_q), std::pow(tau, 1.0 - inv_q), 1.0});
}

double upper_rate(RateKind kind, double q, const RateParams& p) {
  const double tau = tau_of(p);
  const double md = static_cast<double>(p.m);
  const double log_m = std::log(md);
  const double log_mn = std::log(md * p.n);
  if (kind == RateKind::kHellinger) return std::min(tau * p.r * std::sqrt(log_m) * log_mn, 2.0);
  if (kind == RateKind::kKl) return tau * p.r * std::sqrt(log_m) * log_mn;
  if (!(q >= 1.0 && q <= 2.0)) throw ArgumentError("upper_rate: q must lie in [1, 2]");
  const double first = tau * std::pow(p.r, 1.0 / q) * std::sqrt(log_m) * std::pow(log_mn, (2.0 - q) / q);
  const double second = std::pow(tau, 1.0 - 1.0 / q) * std::pow(log_m, 0.5 - 0.5 / q);
  return std::min({first, second, 2.0});
}

double effective_rank(double p, double d, double tau, std::size_t m) {
  if (!(tau > 0.0)) throw ArgumentError("effective_rank: tau must be > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("effective_rank: p must lie in [0, 1]");
  return std::min(d * std::pow(tau, -p), static_cast<double>(m));
}

double bernstein_bound(double sigma_x, double u_x, std::size_t n, double t, std::size_t m) {
  if (n < 1 || m < 1) throw ArgumentError("bernstein_bound: n and m must be >= 1");
  const double a = t + std::log(2.0 * static_cast<double>(m));
  const double nd = static_cast<double>(n);
  return 2.0 * std::max(sigma_x * std::sqrt(a / nd), u_x * a / nd);
}

ExtendedReal fano_kl_between_data_laws(const NoiseModel& model, const DensityMatrix& rho1,
                                       const DensityMatrix& rho2, const ObservableBasis& basis,
                                       std::size_t n) {
  if (rho1.dim() != basis.dim() || rho2.dim() != basis.dim()) {
    throw ArgumentError("fano_kl_between_data_laws: dimension mismatch");
  }
  validate_model(model);
  const std::vector<double> c1 = basis.coefficients(rho1.matrix());
  const std::vector<double> c2 = basis.coefficients(rho2.matrix());
  const double d = static_cast<double>(basis.size());
  const double nd = static_cast<double>(n);

  if (const auto* g = std::get_if<Gaussian>(&model)) {
    // E <rho1 - rho2, X>^2 over the uniform index, which is ||.||_2^2 / m^2.
    double sq = 0.0;
    for (std::size_t j = 0; j < c1.size(); ++j) sq += (c1[j] - c2[j]) * (c1[j] - c2[j]);
    if (g->sigma_xi == 0.0) {
      return sq == 0.0 ? ExtendedReal::finite(0.0) : ExtendedReal::infinite();
    }
    return ExtendedReal::finite(nd / (2.0 * g->sigma_xi * g->sigma_xi) * sq / d);
  }

  ExtendedReal total = ExtendedReal::finite(0.0);
  if (const auto* b = std::get_if<BoundedBinary>(&model)) {
    for (std::size_t j = 0; j < c1.size(); ++j) {
      const double p1 = 0.5 + c1[j] / (2.0 * b->u_bar);
      const double p2 = 0.5 + c2[j] / (2.0 * b->u_bar);
      if (p1 < -1e-12 || p1 > 1 + 1e-12 || p2 < -1e-12 || p2 > 1 + 1e-12) {
        throw ModelError("fano_kl_between_data_laws: binary probability outside [0,1] at element " +
                         std::to_string(j + 1));
      }
      total = total + bernoulli_term(p1, p2) + bernoulli_term(1.0 - p1, 1.0 - p2);
    }
  } else {
    const int k = std::get<StandardQST>(model).K;
    for (std::size_t j = 0; j < c1.size(); ++j) {
      const HermitianMatrix e = basis.element(j);
      total = total + discrete_kl(outcome_distribution(rho1, e), outcome_distribution(rho2, e));
    }
    if (total.is_finite()) total = ExtendedReal::finite(total.value() * k);
  }
  if (total.is_infinite()) return total;
  return ExtendedReal::finite(nd * total.value() / d);
}

FlatVectorResult find_flat_vector(const ObservableBasis& basis, double gamma, int max_tries,
                                  std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("find_flat_vector: gamma must lie in (0, 1)");
  const std::size_t m = basis.dim();
  const double u = basis.u();
  FlatVectorResult out;
  out.threshold = (1.0 - gamma / 2.0) * u;

  // Real parts of the checked elements; <E v, v> = v^T Re(E) v for real v.
  std::vector<std::vector<double>> checked;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const HermitianMatrix e = basis.element(k);
    if (std::abs(e.trace()) > (1.0 - gamma) * u * static_cast<double>(m)) {
      out.exempt.push_back(k);
      continue;
    }
    const auto re = e.entries().re();
    checked.emplace_back(re.begin(), re.end());
  }

  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  out.achieved = kInfinity;
  std::vector<double> v(m);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    CounterRng rng(seed, static_cast<std::uint64_t>(attempt));
    for (double& x : v) x = norm * rng.rademacher();
    double worst = 0.0;
    for (const auto& re : checked) {
      double q = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) row += re[i * m + j] * v[j];
        q += v[i] * row;
      }
      worst = std::max(worst, std::abs(q));
    }
    out.tries = attempt + 1;
    if (worst < out.achieved) {
      out.achieved = worst;
      out.v = v;
    }
    if (worst <= out.threshold) {
      out.found = true;
      break;
    }
  }
  return out;
}

double kappa_choice(double sigma, std::size_t m, std::size_t r, double n, double c1) {
  if (r < 2) throw ArgumentError("kappa_choice: r must be >= 2");
  if (!(n > 0.0)) throw ArgumentError("kappa_choice: n must be > 0");
  return c1 * sigma * std::pow(static_cast<double>(m), 1.5) * static_cast<double>(r - 1) / std::sqrt(n);
}

}  // namespace qst
