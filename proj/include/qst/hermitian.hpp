#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "qst/matrix.hpp"

namespace qst {

/// Eigenvalues in non-increasing order with matching unitary eigenvector columns.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  HermitianMatrix reconstruct() const { return congruence(eigenvectors, eigenvalues); }
};

struct EighOptions {
  int max_sweeps = 100;
  /// Stop once the off-diagonal Frobenius norm is below this multiple of ||A||_2.
  double relative_threshold = 1e-13;
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices. Deterministic;
/// ties in the eigenvalue ordering keep the order Jacobi produced them in.
/// Throws ConvergenceError (carrying the final off-diagonal norm) if the
/// sweep cap is hit.
EigenDecomposition eigh(const HermitianMatrix& a, const EighOptions& options = {});

enum class SpectralFunction { kLog, kSqrt, kExp };

/// Smallest eigenvalue accepted by the matrix logarithm.
inline constexpr double kLogEigenvalueFloor = 1e-300;
/// Eigenvalues in [-kSqrtClampTolerance, 0) are treated as 0 by the square root.
inline constexpr double kSqrtClampTolerance = 1e-10;

/// V diag(f(lambda)) V*. log requires every eigenvalue above
/// kLogEigenvalueFloor and sqrt requires eigenvalues >= -1e-10; otherwise a
/// DomainError carries the offending eigenvalue.
HermitianMatrix apply_spectral_fn(const HermitianMatrix& a, SpectralFunction fn);
HermitianMatrix apply_spectral_fn(const EigenDecomposition& eig, SpectralFunction fn);

/// Same, for an arbitrary scalar function.
HermitianMatrix apply_spectral(const EigenDecomposition& eig,
                               const std::function<double(double)>& fn);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Schatten p-norm, p in [1, inf]. Throws ArgumentError for p < 1.
double schatten_norm(const HermitianMatrix& a, double p);
double schatten_norm_of_spectrum(const std::vector<double>& eigenvalues, double p);

/// Orthogonal projector onto a subspace of C^m.
class SubspaceProjector {
 public:
  SubspaceProjector() = default;

  /// Validates P^2 = P within 1e-9; throws ArgumentError otherwise.
  static SubspaceProjector from_matrix(const HermitianMatrix& p);
  /// Projector onto the span of the first `rank` columns of `frame`, which
  /// must be orthonormal.
  static SubspaceProjector from_columns(const ComplexMatrix& frame, std::size_t rank);
  static SubspaceProjector full(std::size_t dim);
  static SubspaceProjector zero(std::size_t dim);

  std::size_t dim() const noexcept { return p_.dim(); }
  std::size_t rank() const noexcept { return rank_; }
  const HermitianMatrix& matrix() const noexcept { return p_; }

  SubspaceProjector complement() const;

 private:
  SubspaceProjector(HermitianMatrix p, std::size_t rank) : p_(std::move(p)), rank_(rank) {}

  HermitianMatrix p_;
  std::size_t rank_ = 0;
};

struct SupportAndSign {
  SubspaceProjector support;
  HermitianMatrix sign;
};

/// Support projector and sign(A) = sum sign(lambda_j) P_j, counting only
/// eigenvalues with |lambda| > rank_tol. Throws ArgumentError if rank_tol <= 0.
SupportAndSign support_and_sign(const HermitianMatrix& a, double rank_tol);
/// Uses rank_tol = 1e-9 * ||A||_inf.
SupportAndSign support_and_sign(const HermitianMatrix& a);

/// Returns (P_L(A), P_L^perp(A)) with P_L^perp(A) = P_{L^perp} A P_{L^perp}
/// and P_L(A) = A - P_L^perp(A).
std::pair<HermitianMatrix, HermitianMatrix> split_by_subspace(const SubspaceProjector& l,
                                                              const HermitianMatrix& a);

/// Number of eigenvalues with |lambda| > tol.
std::size_t numerical_rank(const HermitianMatrix& a, double tol);

}  // namespace qst
