#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qst/hermitian.hpp"

namespace qst {

/// Element of the spectahedron: Hermitian, PSD, unit trace. Eigenvalues are
/// cached at construction (non-increasing, negatives within tolerance
/// clamped to zero).
class DensityMatrix {
 public:
  DensityMatrix() = default;

  std::size_t dim() const noexcept { return matrix_.dim(); }
  const HermitianMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<double>& eigenvalues() const noexcept { return eig_.eigenvalues; }
  const EigenDecomposition& eigen() const noexcept { return eig_; }
  double min_eigenvalue() const { return eig_.eigenvalues.empty() ? 0.0 : eig_.eigenvalues.back(); }

  /// Maximally mixed state I/m.
  static DensityMatrix maximally_mixed(std::size_t dim);

 private:
  friend DensityMatrix validate_density(const HermitianMatrix& a);
  friend DensityMatrix density_from_spectrum(const ComplexMatrix& vectors,
                                             std::span<const double> weights);
  DensityMatrix(HermitianMatrix m, EigenDecomposition eig)
      : matrix_(std::move(m)), eig_(std::move(eig)) {}

  HermitianMatrix matrix_;
  EigenDecomposition eig_;
};

inline constexpr double kTraceTolerance = 1e-8;
inline constexpr double kPositivityTolerance = 1e-8;

/// Checks A against the spectahedron. Trace off by more than 1e-8 ->
/// TraceError; an eigenvalue below -1e-8 -> PositivityError. Small negative
/// eigenvalues are clamped to zero; nothing is renormalized.
DensityMatrix validate_density(const HermitianMatrix& a);

/// V diag(w) V* for nonnegative w summing to 1 (within tolerances), with
/// the spectrum cached directly instead of re-diagonalizing.
DensityMatrix density_from_spectrum(const ComplexMatrix& vectors, std::span<const double> weights);

/// Euclidean projection of v onto the probability simplex (sort and threshold).
std::vector<double> project_to_simplex(std::span<const double> v);

/// Frobenius-nearest density matrix: eigendecomposition followed by simplex
/// projection of the spectrum.
DensityMatrix project_to_spectahedron(const HermitianMatrix& a);

/// Haar-distributed m x m unitary (QR of a complex Ginibre matrix with
/// positive R diagonal).
ComplexMatrix haar_unitary(std::size_t m, std::uint64_t seed);

/// Real orthogonal matrix with Haar distribution on O(m).
ComplexMatrix haar_orthogonal(std::size_t m, std::uint64_t seed);

/// Random state of rank exactly r: G G* / tr(G G*) for an m x r complex
/// Gaussian G. Unitarily invariant; deterministic per seed.
DensityMatrix haar_random_state(std::size_t m, std::size_t r, std::uint64_t seed);

/// Eigenvalues proportional to j^(-1/p), randomly rotated. Throws
/// ArgumentError when the resulting state violates sum lambda_j^p <= d.
DensityMatrix power_law_state(std::size_t m, double p, double d, std::uint64_t seed);

/// (1 - delta) S' + delta I/m, delta in (0, 1).
DensityMatrix smooth_state(const DensityMatrix& s_prime, double delta);

/// Default smoothing level 1 / (m^2 n^2).
double default_smoothing_delta(std::size_t m, std::size_t n);

/// Block state diag(1 - kappa, kappa Q / (r - 1)) in dimension m = dim(Q) + 1.
DensityMatrix packing_state(const SubspaceProjector& q, double kappa);

struct PackingConfig {
  std::size_t m = 0;
  std::size_t r = 0;
  double kappa = 0.0;
  std::size_t count = 0;
  double q = 1.0;
  double min_separation = 0.0;

  /// Throws ArgumentError unless kappa in (0,1), r >= 2 and the rank-(r-1)
  /// subspaces of R^(m-1) satisfy (r-1) <= (m-1) - (r-1).
  void validate() const;
};

struct PackingResult {
  std::vector<SubspaceProjector> projectors;
  std::size_t attempts = 0;
  /// False when the attempt budget ran out before `count` projectors were found.
  bool complete = false;
};

/// Greedy rejection sampling of rank-(r-1) projectors in dimension m-1,
/// pairwise ||Q_i - Q_j||_q > min_separation. Subspaces are Haar-random in
/// R^(m-1), embedded as complex Hermitian matrices.
PackingResult sample_projector_packing(const PackingConfig& cfg, std::uint64_t seed,
                                       std::size_t max_attempts = 0);

}  // namespace qst
