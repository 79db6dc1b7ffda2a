#include "qst/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qst/error.hpp"
#include "qst/rng.hpp"

namespace qst {

namespace {

// Modified Gram-Schmidt with one reorthogonalization pass, column by column.
// R's diagonal is the column norm, so it is positive by construction.
ComplexMatrix orthonormalize_columns(ComplexMatrix g) {
  const std::size_t m = g.dim();
  for (std::size_t j = 0; j < m; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += std::conj(g(i, k)) * g(i, j);
        for (std::size_t i = 0; i < m; ++i) g.set(i, j, g(i, j) - proj * g(i, k));
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += std::norm(g(i, j));
    norm = std::sqrt(norm);
    g.scale_column(j, 1.0 / norm);
  }
  return g;
}

}  // namespace

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return density_from_spectrum(ComplexMatrix::identity(dim),
                               std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

DensityMatrix validate_density(const HermitianMatrix& a) {
  const double tr = a.trace();
  if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr << ", expected 1";
    throw TraceError(msg.str());
  }
  EigenDecomposition eig = eigh(a);
  const double lowest = eig.eigenvalues.back();
  if (lowest < -kPositivityTolerance) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << lowest;
    throw PositivityError(msg.str());
  }
  if (lowest >= 0.0) return DensityMatrix(a, std::move(eig));
  for (double& l : eig.eigenvalues) l = std::max(l, 0.0);
  HermitianMatrix clamped = eig.reconstruct();
  return DensityMatrix(std::move(clamped), std::move(eig));
}

DensityMatrix density_from_spectrum(const ComplexMatrix& vectors, std::span<const double> weights) {
  const std::size_t n = vectors.dim();
  if (weights.size() != n) throw ArgumentError("density_from_spectrum: weight count != dim");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return weights[x] > weights[y]; });
  EigenDecomposition eig{std::vector<double>(n), ComplexMatrix(n)};
  double total = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    const double w = weights[order[col]];
    if (w < -kPositivityTolerance) throw PositivityError("density_from_spectrum: negative weight");
    eig.eigenvalues[col] = std::max(w, 0.0);
    total += eig.eigenvalues[col];
    for (std::size_t i = 0; i < n; ++i) eig.eigenvectors.set(i, col, vectors(i, order[col]));
  }
  if (!(std::abs(total - 1.0) <= kTraceTolerance)) {
    throw TraceError("density_from_spectrum: weights do not sum to 1");
  }
  HermitianMatrix m = eig.reconstruct();
  return DensityMatrix(std::move(m), std::move(eig));
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("project_to_simplex: empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [theta](double x) { return std::max(x - theta, 0.0); });
  return out;
}

DensityMatrix project_to_spectahedron(const HermitianMatrix& a) {
  const EigenDecomposition eig = eigh(a);
  const std::vector<double> w = project_to_simplex(eig.eigenvalues);
  return density_from_spectrum(eig.eigenvectors, w);
}

ComplexMatrix haar_unitary(std::size_t m, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  ComplexMatrix g(m);
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g.set(i, j, {s * re, s * im});
    }
  }
  return orthonormalize_columns(std::move(g));
}

ComplexMatrix haar_orthogonal(std::size_t m, std::uint64_t seed) {
  CounterRng rng(seed, 1);
  ComplexMatrix g(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) g.set(i, j, rng.normal());
  }
  return orthonormalize_columns(std::move(g));
}

DensityMatrix haar_random_state(std::size_t m, std::size_t r, std::uint64_t seed) {
  if (m == 0 || r < 1 || r > m) {
    throw ArgumentError("haar_random_state: rank must lie in [1, m]");
  }
  CounterRng rng(seed, 2);
  ComplexMatrix g(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g.set(i, j, {re, im});
    }
  }
  ComplexMatrix ggh = g * g.adjoint();
  HermitianMatrix h(ggh);
  h *= 1.0 / h.trace();
  return validate_density(h);
}

DensityMatrix power_law_state(std::size_t m, double p, double d, std::uint64_t seed) {
  if (m == 0) throw ArgumentError("power_law_state: m must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("power_law_state: p must lie in (0, 1]");
  std::vector<double> lambda(m);
  for (std::size_t j = 0; j < m; ++j) lambda[j] = std::pow(static_cast<double>(j + 1), -1.0 / p);
  const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  double membership = 0.0;
  for (double& l : lambda) {
    l /= total;
    membership += std::pow(l, p);
  }
  if (membership > d * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "power_law_state: sum lambda^p = " << membership << " exceeds d = " << d;
    throw ArgumentError(msg.str());
  }
  return density_from_spectrum(haar_unitary(m, seed), lambda);
}

DensityMatrix smooth_state(const DensityMatrix& s_prime, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("smooth_state: delta must lie in (0, 1)");
  const double floor = delta / static_cast<double>(s_prime.dim());
  std::vector<double> w(s_prime.eigenvalues());
  for (double& l : w) l = (1.0 - delta) * l + floor;
  return density_from_spectrum(s_prime.eigen().eigenvectors, w);
}

double default_smoothing_delta(std::size_t m, std::size_t n) {
  const double mn = static_cast<double>(m) * static_cast<double>(n);
  return 1.0 / (mn * mn);
}

DensityMatrix packing_state(const SubspaceProjector& q, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ArgumentError("packing_state: kappa must lie in (0, 1)");
  if (q.rank() < 1) throw ArgumentError("packing_state: projector rank r-1 must be >= 1");
  const std::size_t inner = q.dim();
  const std::size_t m = inner + 1;
  const double scale = kappa / static_cast<double>(q.rank());
  ComplexMatrix block(m);
  block.set(0, 0, 1.0 - kappa);
  for (std::size_t i = 0; i < inner; ++i) {
    for (std::size_t j = 0; j < inner; ++j) block.set(i + 1, j + 1, scale * q.matrix()(i, j));
  }
  return validate_density(HermitianMatrix(block));
}

void PackingConfig::validate() const {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ArgumentError("PackingConfig: kappa must lie in (0, 1)");
  if (r < 2) throw ArgumentError("PackingConfig: r must be >= 2");
  if (m < 3 || 2 * (r - 1) > m - 1) {
    throw ArgumentError("PackingConfig: need r - 1 <= (m - 1) - (r - 1)");
  }
  if (count < 1) throw ArgumentError("PackingConfig: count must be >= 1");
  if (!(q >= 1.0)) throw ArgumentError("PackingConfig: q must be >= 1");
  if (!(min_separation >= 0.0)) throw ArgumentError("PackingConfig: min_separation must be >= 0");
}

PackingResult sample_projector_packing(const PackingConfig& cfg, std::uint64_t seed,
                                       std::size_t max_attempts) {
  cfg.validate();
  if (max_attempts == 0) max_attempts = 1000 * cfg.count;
  PackingResult out;
  while (out.projectors.size() < cfg.count && out.attempts < max_attempts) {
    const ComplexMatrix frame = haar_orthogonal(cfg.m - 1, derive_seed(seed, {out.attempts}));
    ++out.attempts;
    SubspaceProjector candidate = SubspaceProjector::from_columns(frame, cfg.r - 1);
    const bool separated = std::all_of(
        out.projectors.begin(), out.projectors.end(), [&](const SubspaceProjector& other) {
          return schatten_norm(candidate.matrix() - other.matrix(), cfg.q) > cfg.min_separation;
        });
    if (separated) out.projectors.push_back(std::move(candidate));
  }
  out.complete = out.projectors.size() == cfg.count;
  return out;
}

}  // namespace qst
