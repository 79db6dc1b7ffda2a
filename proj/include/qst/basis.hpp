#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qst/hermitian.hpp"
#include "qst/state.hpp"

namespace qst {

/// Ordered orthonormal family E_1..E_{m^2} of Hermitian matrices with an
/// operator-norm bound U. Indices are 0-based in the API.
///
/// Pauli bases are never stored densely: every element is a signed
/// permutation matrix scaled by m^{-1/2}, so element access, coefficient
/// extraction and weighted sums run directly on that structure. Custom
/// bases keep their dense elements.
class ObservableBasis {
 public:
  /// Tensor-product Pauli basis on b qubits, 1 <= b <= 8. Single-qubit
  /// factors in order I, sigma_y, sigma_x, sigma_z (each over sqrt 2); the
  /// first qubit is the most significant index digit.
  static ObservableBasis pauli(int qubits);

  /// Takes the elements as given; U is the measured max operator norm. No
  /// orthonormality check here, see validate_basis / load_basis.
  static ObservableBasis from_elements(std::vector<HermitianMatrix> elements, std::string label);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ * dim_; }
  double u() const noexcept { return u_; }
  const std::string& label() const noexcept { return label_; }
  std::optional<int> pauli_qubits() const noexcept { return qubits_; }

  /// E_j (0-based).
  HermitianMatrix element(std::size_t j) const;

  /// <A, E_j> for every j.
  std::vector<double> coefficients(const HermitianMatrix& a) const;

  /// sum_j w_j E_j.
  HermitianMatrix combine(std::span<const double> weights) const;

 private:
  ObservableBasis() = default;

  std::size_t dim_ = 0;
  double u_ = 0.0;
  std::string label_;
  std::optional<int> qubits_;
  std::shared_ptr<const std::vector<HermitianMatrix>> dense_;
};

struct ValidationReport {
  std::size_t element_count = 0;
  std::size_t expected_count = 0;
  /// max_{j,k} |<E_j, E_k> - delta_jk|
  double max_orthonormality_deviation = 0.0;
  /// max_j ||E_j||_inf
  double measured_u = 0.0;
  double declared_u = 0.0;
  double gamma = 0.0;
  /// Indices k with |tr(E_k)| > (1 - gamma) U m.
  std::vector<std::size_t> trace_violators;

  bool orthonormal(double tol = 1e-10) const {
    return element_count == expected_count && max_orthonormality_deviation <= tol;
  }
};

/// Gram-matrix and norm audit. O(m^6); intended for m <= 32.
ValidationReport validate_basis(const ObservableBasis& basis, double gamma);

/// <rho, E_j> for all j. Throws ArgumentError on dimension mismatch.
std::vector<double> fourier_coefficients(const DensityMatrix& rho, const ObservableBasis& basis);

/// Resolves "pauli:<b>" or a path to a JSON basis file. File bases must
/// pass validate_basis (deviation <= 1e-10) or ArgumentError is thrown.
ObservableBasis load_basis(const std::string& spec);

}  // namespace qst
