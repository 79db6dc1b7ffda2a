#include "qst/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qst/error.hpp"

namespace qst {

namespace {

// Row-major complex working copy; Jacobi touches whole rows and columns, so
// interleaved storage is simpler here than the planar layout.
struct Work {
  std::size_t n;
  std::vector<Complex> a;
  std::vector<Complex> v;

  Complex& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  Complex& vec(std::size_t i, std::size_t j) { return v[i * n + j]; }
};

double off_diagonal_norm(Work& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.n; ++i) {
    for (std::size_t j = i + 1; j < w.n; ++j) s += std::norm(w.at(i, j));
  }
  return std::sqrt(2.0 * s);
}

void rotate(Work& w, std::size_t p, std::size_t q) {
  const Complex apq = w.at(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const double app = w.at(p, p).real();
  const double aqq = w.at(q, q).real();
  const Complex phase = apq / g;

  const double theta = (aqq - app) / (2.0 * g);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // J = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on columns p, q.
  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const std::size_t n = w.n;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = w.at(k, p);
    const Complex akq = w.at(k, q);
    w.at(k, p) = akp * jpp + akq * jqp;
    w.at(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = w.at(p, k);
    const Complex aqk = w.at(q, k);
    w.at(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    w.at(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = w.vec(k, p);
    const Complex vkq = w.vec(k, q);
    w.vec(k, p) = vkp * jpp + vkq * jqp;
    w.vec(k, q) = vkp * jpq + vkq * jqq;
  }
  w.at(p, q) = 0.0;
  w.at(q, p) = 0.0;
  w.at(p, p) = app - t * g;
  w.at(q, q) = aqq + t * g;
}

}  // namespace

EigenDecomposition eigh(const HermitianMatrix& a, const EighOptions& options) {
  const std::size_t n = a.dim();
  Work w{n, std::vector<Complex>(n * n), std::vector<Complex>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w.at(i, j) = a(i, j);
    w.vec(i, i) = 1.0;
  }

  const double threshold = options.relative_threshold * a.frobenius();
  double off = off_diagonal_norm(w);
  int sweep = 0;
  while (off > threshold) {
    if (sweep == options.max_sweeps) {
      std::ostringstream msg;
      msg << "eigh: no convergence after " << options.max_sweeps
          << " sweeps, off-diagonal residual " << off;
      throw ConvergenceError(msg.str(), off);
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) rotate(w, p, q);
    }
    off = off_diagonal_norm(w);
    ++sweep;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return w.at(x, x).real() > w.at(y, y).real();
  });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues[col] = w.at(src, src).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors.set(i, col, w.vec(i, src));
  }
  return out;
}

HermitianMatrix apply_spectral(const EigenDecomposition& eig,
                               const std::function<double(double)>& fn) {
  std::vector<double> mapped(eig.eigenvalues.size());
  std::transform(eig.eigenvalues.begin(), eig.eigenvalues.end(), mapped.begin(), fn);
  return congruence(eig.eigenvectors, mapped);
}

HermitianMatrix apply_spectral_fn(const EigenDecomposition& eig, SpectralFunction fn) {
  switch (fn) {
    case SpectralFunction::kLog: {
      for (double l : eig.eigenvalues) {
        if (!(l > kLogEigenvalueFloor)) {
          std::ostringstream msg;
          msg << "matrix log: eigenvalue " << l << " is below the floor " << kLogEigenvalueFloor;
          throw DomainError(msg.str(), l);
        }
      }
      return apply_spectral(eig, [](double l) { return std::log(l); });
    }
    case SpectralFunction::kSqrt: {
      for (double l : eig.eigenvalues) {
        if (l < -kSqrtClampTolerance) {
          std::ostringstream msg;
          msg << "matrix sqrt: negative eigenvalue " << l;
          throw DomainError(msg.str(), l);
        }
      }
      return apply_spectral(eig, [](double l) { return std::sqrt(std::max(l, 0.0)); });
    }
    case SpectralFunction::kExp:
      return apply_spectral(eig, [](double l) { return std::exp(l); });
  }
  throw ArgumentError("apply_spectral_fn: unknown function");
}

HermitianMatrix apply_spectral_fn(const HermitianMatrix& a, SpectralFunction fn) {
  return apply_spectral_fn(eigh(a), fn);
}

double schatten_norm_of_spectrum(const std::vector<double>& eigenvalues, double p) {
  if (std::isnan(p) || p < 1.0) throw ArgumentError("schatten_norm: p must be >= 1");
  double largest = 0.0;
  for (double l : eigenvalues) largest = std::max(largest, std::abs(l));
  if (std::isinf(p) || largest == 0.0) return largest;
  double s = 0.0;
  for (double l : eigenvalues) s += std::pow(std::abs(l) / largest, p);
  return largest * std::pow(s, 1.0 / p);
}

double schatten_norm(const HermitianMatrix& a, double p) {
  if (std::isnan(p) || p < 1.0) throw ArgumentError("schatten_norm: p must be >= 1");
  return schatten_norm_of_spectrum(eigh(a).eigenvalues, p);
}

SubspaceProjector SubspaceProjector::from_matrix(const HermitianMatrix& p) {
  const ComplexMatrix sq = p.entries() * p.entries();
  if (max_abs_diff(sq, p.entries()) > 1e-9) {
    throw ArgumentError("SubspaceProjector: matrix is not idempotent");
  }
  const double tr = p.trace();
  return SubspaceProjector(p, static_cast<std::size_t>(std::llround(std::max(tr, 0.0))));
}

SubspaceProjector SubspaceProjector::from_columns(const ComplexMatrix& frame, std::size_t rank) {
  if (rank > frame.dim()) throw ArgumentError("SubspaceProjector: rank exceeds dimension");
  std::vector<double> w(frame.dim(), 0.0);
  std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(rank), 1.0);
  return SubspaceProjector(congruence(frame, w), rank);
}

SubspaceProjector SubspaceProjector::full(std::size_t dim) {
  return SubspaceProjector(HermitianMatrix::identity(dim), dim);
}

SubspaceProjector SubspaceProjector::zero(std::size_t dim) {
  return SubspaceProjector(HermitianMatrix::zero(dim), 0);
}

SubspaceProjector SubspaceProjector::complement() const {
  return SubspaceProjector(HermitianMatrix::identity(dim()) - p_, dim() - rank_);
}

SupportAndSign support_and_sign(const HermitianMatrix& a, double rank_tol) {
  if (!(rank_tol > 0.0)) throw ArgumentError("support_and_sign: rank_tol must be > 0");
  const EigenDecomposition eig = eigh(a);
  const std::size_t n = a.dim();
  std::vector<double> indicator(n), signs(n);
  std::size_t rank = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double l = eig.eigenvalues[j];
    if (std::abs(l) > rank_tol) {
      indicator[j] = 1.0;
      signs[j] = l > 0.0 ? 1.0 : -1.0;
      ++rank;
    }
  }
  return {SubspaceProjector::from_matrix(congruence(eig.eigenvectors, indicator)),
          congruence(eig.eigenvectors, signs)};
}

SupportAndSign support_and_sign(const HermitianMatrix& a) {
  const double scale = schatten_norm(a, kInfinity);
  if (scale == 0.0) {
    return {SubspaceProjector::zero(a.dim()), HermitianMatrix::zero(a.dim())};
  }
  return support_and_sign(a, 1e-9 * scale);
}

std::pair<HermitianMatrix, HermitianMatrix> split_by_subspace(const SubspaceProjector& l,
                                                              const HermitianMatrix& a) {
  if (l.dim() != a.dim()) throw ArgumentError("split_by_subspace: dimension mismatch");
  const HermitianMatrix perp_proj = l.complement().matrix();
  HermitianMatrix perp = sandwich(perp_proj, a);
  HermitianMatrix along = a - perp;
  return {std::move(along), std::move(perp)};
}

std::size_t numerical_rank(const HermitianMatrix& a, double tol) {
  const EigenDecomposition eig = eigh(a);
  return static_cast<std::size_t>(std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(),
                                                [tol](double l) { return std::abs(l) > tol; }));
}

}  // namespace qst
