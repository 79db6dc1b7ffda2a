#pragma once

// Reference computations for tests. Nothing here calls the library's
// spectral code or basis machinery: Pauli matrices are written out by hand,
// 2x2 spectra use the closed form, and minimizers come from grid search.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "qst/matrix.hpp"
#include "qst/sampler.hpp"
#include "qst/state.hpp"

namespace oracle {

using qst::Complex;
using C2 = std::array<std::array<Complex, 2>, 2>;

inline std::mt19937_64& engine() {
  static thread_local std::mt19937_64 gen(20240611);
  return gen;
}

inline double gauss(std::mt19937_64& g) { return std::normal_distribution<double>(0.0, 1.0)(g); }
inline double unif(std::mt19937_64& g) { return std::uniform_real_distribution<double>(0.0, 1.0)(g); }

inline qst::HermitianMatrix random_hermitian(std::size_t m, std::mt19937_64& g, double scale = 1.0) {
  qst::ComplexMatrix a(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a.set(i, j, {scale * gauss(g), scale * gauss(g)});
  }
  return qst::HermitianMatrix(a);
}

/// Traceless Hermitian direction with unit Frobenius norm.
inline qst::HermitianMatrix random_traceless(std::size_t m, std::mt19937_64& g) {
  qst::HermitianMatrix a = random_hermitian(m, g);
  a.add_scaled(-a.trace() / static_cast<double>(m), qst::HermitianMatrix::identity(m));
  a *= 1.0 / a.frobenius();
  return a;
}

/// Mixed generator: full-rank Haar, random low rank, or near-pure.
inline qst::DensityMatrix random_state(std::size_t m, std::mt19937_64& g, int kind) {
  const std::uint64_t seed = g();
  switch (kind % 3) {
    case 0: return qst::haar_random_state(m, m, seed);
    case 1: return qst::haar_random_state(m, 1 + g() % m, seed);
    default: {
      const qst::DensityMatrix pure = qst::haar_random_state(m, 1, seed);
      const double delta = std::pow(10.0, -3.0 - 9.0 * unif(g));
      return qst::smooth_state(pure, delta);
    }
  }
}

// Hand-written single-qubit basis in the library's order I, sigma_y,
// sigma_x, sigma_z, each over sqrt 2.
inline C2 pauli2(int k) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  switch (k) {
    case 0: return {{{s, 0.0}, {0.0, s}}};
    case 1: return {{{0.0, -i * s}, {i * s, 0.0}}};
    case 2: return {{{0.0, s}, {s, 0.0}}};
    default: return {{{s, 0.0}, {0.0, -s}}};
  }
}

/// Kronecker product of hand-written factors, first factor most significant.
inline qst::HermitianMatrix pauli_dense(int qubits, std::size_t index) {
  std::vector<int> digits(qubits);
  for (int k = qubits - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(index % 4);
    index /= 4;
  }
  const std::size_t m = std::size_t{1} << qubits;
  qst::ComplexMatrix out(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      Complex v = 1.0;
      for (int k = 0; k < qubits; ++k) {
        const int bit = qubits - 1 - k;
        v *= pauli2(digits[k])[(r >> bit) & 1][(c >> bit) & 1];
      }
      out.set(r, c, v);
    }
  }
  return qst::HermitianMatrix(out);
}

/// tr(A B) by the entrywise sum Re(conj(A_ij) B_ij).
inline double trace_product(const qst::HermitianMatrix& a, const qst::HermitianMatrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) acc += (std::conj(a(i, j)) * b(i, j)).real();
  }
  return acc;
}

/// (I + x sigma_x + y sigma_y + z sigma_z)/2.
inline qst::HermitianMatrix bloch_matrix(double x, double y, double z) {
  qst::ComplexMatrix s(2);
  s.set(0, 0, 0.5 * (1.0 + z));
  s.set(1, 1, 0.5 * (1.0 - z));
  s.set(0, 1, {0.5 * x, -0.5 * y});
  s.set(1, 0, {0.5 * x, 0.5 * y});
  return qst::HermitianMatrix(s);
}

/// Closed-form 2x2 spectrum (1 +- |r|)/2.
inline std::array<double, 2> bloch_spectrum(double x, double y, double z) {
  const double len = std::sqrt(x * x + y * y + z * z);
  return {0.5 * (1.0 + len), 0.5 * (1.0 - len)};
}

inline double bloch_neg_entropy(double x, double y, double z) {
  double acc = 0.0;
  for (double l : bloch_spectrum(x, y, z)) {
    if (l > 0.0) acc += l * std::log(l);
  }
  return acc;
}

struct GridMin {
  double value = 0.0;
  std::array<double, 3> point{};
};

/// Minimizes f over the Bloch ball on a spherical grid (radius, polar,
/// azimuth) with `coarse` points per axis; radius 1 lies on the grid, so
/// boundary optima are reachable exactly. Then `levels` local 21^3 grids
/// spanning two old steps either side of the incumbent shrink the spacing
/// fivefold per level.
inline GridMin bloch_grid_min(const std::function<double(double, double, double)>& f, int coarse,
                              int levels) {
  const double pi = std::acos(-1.0);
  GridMin best{INFINITY, {0, 0, 0}};
  std::array<double, 3> best_polar{0, 0, 0};
  auto eval = [&](double r, double th, double ph) {
    r = std::clamp(r, 0.0, 1.0);
    th = std::clamp(th, 0.0, pi);
    const double x = r * std::sin(th) * std::cos(ph);
    const double y = r * std::sin(th) * std::sin(ph);
    const double z = r * std::cos(th);
    const double v = f(x, y, z);
    if (v < best.value) {
      best = {v, {x, y, z}};
      best_polar = {r, th, ph};
    }
  };
  std::array<double, 3> step{1.0 / (coarse - 1), pi / (coarse - 1), 2.0 * pi / coarse};
  for (int a = 0; a < coarse; ++a)
    for (int b = 0; b < coarse; ++b)
      for (int c = 0; c < coarse; ++c) eval(a * step[0], b * step[1], c * step[2]);
  for (int l = 0; l < levels; ++l) {
    const std::array<double, 3> centre = best_polar;
    for (auto& s : step) s *= 0.2;
    for (int a = -10; a <= 10; ++a)
      for (int b = -10; b <= 10; ++b)
        for (int c = -10; c <= 10; ++c)
          eval(centre[0] + a * step[0], centre[1] + b * step[1], centre[2] + c * step[2]);
  }
  return best;
}

/// Every basis index once with its exact Fourier coefficient as outcome.
inline qst::Dataset full_sweep(const qst::DensityMatrix& rho, const qst::ObservableBasis& basis) {
  qst::Dataset d;
  d.basis_label = basis.label();
  d.m = basis.dim();
  d.model = qst::Gaussian{0.0};
  for (std::size_t j = 0; j < basis.size(); ++j) {
    d.records.push_back({j, trace_product(rho.matrix(), basis.element(j))});
  }
  return d;
}

/// Empirical squared loss by a plain loop over records, with m = 2 Pauli
/// elements written out by hand.
inline double pauli1_loss(const qst::Dataset& d, const qst::HermitianMatrix& s) {
  if (d.records.empty()) return 0.0;
  std::array<double, 4> c{};
  for (int k = 0; k < 4; ++k) {
    const C2 e = pauli2(k);
    double acc = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) acc += (s(i, j) * e[j][i]).real();
    }
    c[k] = acc;
  }
  double total = 0.0;
  for (const auto& r : d.records) total += (r.outcome - c[r.index]) * (r.outcome - c[r.index]);
  return total / static_cast<double>(d.records.size());
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

}  // namespace oracle
