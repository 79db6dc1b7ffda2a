#include "qst/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "qst/error.hpp"

namespace qst {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* op) {
  if (a.dim() != b.dim()) throw ArgumentError(std::string(op) + ": dimension mismatch");
}

HermitianMatrix sqrt_of(const DensityMatrix& s) {
  std::vector<double> w(s.eigenvalues());
  for (double& l : w) l = std::sqrt(std::max(l, 0.0));
  return congruence(s.eigen().eigenvectors, w);
}

// Sum of singular values by one-sided (Hestenes) Jacobi on the rows. The
// singular values come out as row norms, so no square root of a rounded
// eigenvalue is ever taken: tiny singular values keep absolute accuracy.
double nuclear_norm(const ComplexMatrix& b) {
  const std::size_t m = b.dim();
  std::vector<std::vector<Complex>> rows(m, std::vector<Complex>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) rows[i][j] = b(i, j);
  }
  auto sq_norm = [m](const std::vector<Complex>& v) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += std::norm(v[k]);
    return acc;
  };
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        auto& x = rows[p];
        auto& y = rows[q];
        const double alpha = sq_norm(x);
        const double beta = sq_norm(y);
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) gamma += x[k] * std::conj(y[k]);
        const double g = std::abs(gamma);
        if (g <= 1e-15 * std::sqrt(alpha * beta) || g == 0.0) continue;
        rotated = true;
        // Rotate y by the phase of gamma so the pair becomes a real 2x2 problem.
        const Complex phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const Complex xk = x[k];
          const Complex yk = phase * y[k];
          x[k] = c * xk - s * yk;
          y[k] = (s * xk + c * yk) * std::conj(phase);
        }
      }
    }
    if (!rotated) break;
  }
  double total = 0.0;
  for (const auto& r : rows) total += std::sqrt(sq_norm(r));
  return total;
}

}  // namespace

double ExtendedReal::value() const {
  if (infinite_) throw ArgumentError("ExtendedReal: value() on +infinity");
  return value_;
}

double ExtendedReal::as_double() const noexcept { return infinite_ ? kInfinity : value_; }

std::string ExtendedReal::to_string() const {
  if (infinite_) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

double schatten_distance(const DensityMatrix& s1, const DensityMatrix& s2, double q) {
  require_same_dim(s1, s2, "schatten_distance");
  return schatten_norm(s1.matrix() - s2.matrix(), q);
}

double bures_hellinger_sq(const DensityMatrix& s1, const DensityMatrix& s2) {
  require_same_dim(s1, s2, "bures_hellinger_sq");
  // tr sqrt(S1^1/2 S2 S1^1/2) is the nuclear norm of S1^1/2 S2^1/2.
  const ComplexMatrix b = sqrt_of(s1).entries() * sqrt_of(s2).entries();
  return std::clamp(2.0 - 2.0 * nuclear_norm(b), 0.0, 2.0);
}

namespace {

ExtendedReal relative_entropy(const DensityMatrix& s1, const DensityMatrix& s2) {
  const std::size_t m = s1.dim();
  const auto& l1 = s1.eigenvalues();
  const auto& l2 = s2.eigenvalues();
  // |<u_i, v_j>|^2 for eigenvectors u of S1 and v of S2.
  const ComplexMatrix overlap = s1.eigen().eigenvectors.adjoint() * s2.eigen().eigenvectors;

  double self = 0.0;
  for (double l : l1) {
    if (l > 0.0) self += l * std::log(l);
  }
  double cross = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) mass += l1[i] * std::norm(overlap(i, j));
    if (l2[j] < kKlSupportFloor) {
      if (mass > kKlMassTolerance) return ExtendedReal::infinite();
      continue;
    }
    cross += mass * std::log(l2[j]);
  }
  return ExtendedReal::finite(std::max(self - cross, 0.0));
}

}  // namespace

ExtendedReal quantum_kl(const DensityMatrix& s1, const DensityMatrix& s2, bool symmetrized) {
  require_same_dim(s1, s2, "quantum_kl");
  ExtendedReal k = relative_entropy(s1, s2);
  if (symmetrized) k = k + relative_entropy(s2, s1);
  return k;
}

double l2_pi_distance(const HermitianMatrix& a, const HermitianMatrix& b, std::size_t m) {
  if (a.dim() != m || b.dim() != m) throw ArgumentError("l2_pi_distance: dimension mismatch");
  return (a - b).frobenius() / static_cast<double>(m);
}

InequalityReport check_distance_inequalities(const DensityMatrix& s1, const DensityMatrix& s2) {
  InequalityReport r;
  r.trace_distance = schatten_distance(s1, s2, 1.0);
  r.hellinger_sq = bures_hellinger_sq(s1, s2);
  r.kl = quantum_kl(s1, s2);
  r.lower_slack = r.hellinger_sq - 0.25 * r.trace_distance * r.trace_distance;
  r.trace_slack = r.trace_distance - r.hellinger_sq;
  if (r.kl.is_finite()) r.kl_slack = r.kl.value() - r.hellinger_sq;
  return r;
}

double binary_entropy(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("binary_entropy: delta must lie in (0, 1)");
  return -delta * std::log(delta) - (1.0 - delta) * std::log1p(-delta);
}

double kl_bound_after_smoothing(double k_smoothed, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ArgumentError("kl_bound_after_smoothing: delta must lie in (0, 1)");
  }
  if (!(k_smoothed >= 0.0)) throw ArgumentError("kl_bound_after_smoothing: K must be >= 0");
  return (k_smoothed + binary_entropy(delta)) / (1.0 - delta);
}

}  // namespace qst
