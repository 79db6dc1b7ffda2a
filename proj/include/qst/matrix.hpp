#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qst {

using Complex = std::complex<double>;

/// Dense square complex matrix, planar row-major storage. General (not
/// necessarily Hermitian); used for eigenvectors, unitaries and products.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);

  static ComplexMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }

  Complex operator()(std::size_t i, std::size_t j) const {
    return {re_[i * dim_ + j], im_[i * dim_ + j]};
  }
  void set(std::size_t i, std::size_t j, Complex v) {
    re_[i * dim_ + j] = v.real();
    im_[i * dim_ + j] = v.imag();
  }

  std::span<const double> re() const noexcept { return re_; }
  std::span<const double> im() const noexcept { return im_; }
  std::span<double> re() noexcept { return re_; }
  std::span<double> im() noexcept { return im_; }

  ComplexMatrix adjoint() const;

  /// Multiplies column j by s.
  void scale_column(std::size_t j, double s);

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(double s);

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }

  /// Largest absolute entrywise difference.
  friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

/// Frobenius norm of a general matrix.
double frobenius_norm(const ComplexMatrix& a);

/// m x m complex Hermitian matrix. Construction from arbitrary entries
/// symmetrizes, (M + M*)/2, so the Hermitian invariant holds exactly and
/// the diagonal is real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim) : m_(dim) {}
  explicit HermitianMatrix(const ComplexMatrix& entries);

  static HermitianMatrix zero(std::size_t dim) { return HermitianMatrix(dim); }
  static HermitianMatrix identity(std::size_t dim);
  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix from_real(std::size_t dim, std::span<const double> row_major);

  std::size_t dim() const noexcept { return m_.dim(); }
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const ComplexMatrix& entries() const noexcept { return m_; }

  double trace() const;
  /// Hilbert-Schmidt (Frobenius) norm.
  double frobenius() const { return frobenius_norm(m_); }

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double s);

  /// this += s * other, through the active axpy kernel.
  void add_scaled(double s, const HermitianMatrix& other);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  ComplexMatrix m_;
};

/// V diag(weights) V*.
HermitianMatrix congruence(const ComplexMatrix& v, std::span<const double> weights);

/// A B A for Hermitian A, B.
HermitianMatrix sandwich(const HermitianMatrix& a, const HermitianMatrix& b);

/// Hilbert-Schmidt inner product tr(AB); real for Hermitian arguments.
/// Throws ArgumentError on dimension mismatch.
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// Largest |A_ij - conj(A_ji)|; zero for any constructed HermitianMatrix.
double hermitian_defect(const ComplexMatrix& a);

}  // namespace qst
