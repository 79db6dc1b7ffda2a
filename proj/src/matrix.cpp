#include "qst/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qst/error.hpp"
#include "qst/kernels.hpp"

namespace qst {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ArgumentError(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                        " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim)
    : dim_(dim), re_(dim * dim, 0.0), im_(dim * dim, 0.0) {}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) out.re_[i * dim + i] = 1.0;
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      out.re_[j * dim_ + i] = re_[i * dim_ + j];
      out.im_[j * dim_ + i] = -im_[i * dim_ + j];
    }
  }
  return out;
}

void ComplexMatrix::scale_column(std::size_t j, double s) {
  for (std::size_t i = 0; i < dim_; ++i) {
    re_[i * dim_ + j] *= s;
    im_[i * dim_ + j] *= s;
  }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(dim_, other.dim_, "ComplexMatrix +=");
  kernels::axpy(1.0, other.re_, re_);
  kernels::axpy(1.0, other.im_, im_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(dim_, other.dim_, "ComplexMatrix -=");
  kernels::axpy(-1.0, other.re_, re_);
  kernels::axpy(-1.0, other.im_, im_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double s) {
  for (double& v : re_) v *= s;
  for (double& v : im_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "ComplexMatrix *");
  ComplexMatrix c(a.dim_);
  kernels::active().cgemm(a.dim_, a.re_.data(), a.im_.data(), b.re_.data(), b.im_.data(),
                          c.re_.data(), c.im_.data());
  return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.re_.size(); ++k) {
    worst = std::max(worst, std::hypot(a.re_[k] - b.re_[k], a.im_[k] - b.im_[k]));
  }
  return worst;
}

double frobenius_norm(const ComplexMatrix& a) {
  return std::sqrt(kernels::dot(a.re(), a.re()) + kernels::dot(a.im(), a.im()));
}

double hermitian_defect(const ComplexMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = i; j < a.dim(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  return worst;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& entries) : m_(entries.dim()) {
  const std::size_t n = entries.dim();
  auto re = m_.re();
  auto im = m_.im();
  const auto sre = entries.re();
  const auto sim = entries.im();
  for (std::size_t i = 0; i < n; ++i) {
    re[i * n + i] = sre[i * n + i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = 0.5 * (sre[i * n + j] + sre[j * n + i]);
      const double c = 0.5 * (sim[i * n + j] - sim[j * n + i]);
      re[i * n + j] = r;
      re[j * n + i] = r;
      im[i * n + j] = c;
      im[j * n + i] = -c;
    }
  }
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  return HermitianMatrix(ComplexMatrix::identity(dim));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  HermitianMatrix out(values.size());
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) out.m_.re()[i * n + i] = values[i];
  return out;
}

HermitianMatrix HermitianMatrix::from_real(std::size_t dim, std::span<const double> row_major) {
  if (row_major.size() != dim * dim) throw ArgumentError("from_real: expected dim*dim entries");
  ComplexMatrix c(dim);
  std::copy(row_major.begin(), row_major.end(), c.re().begin());
  return HermitianMatrix(c);
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) t += m_.re()[i * n + i];
  return t;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  m_ += other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  m_ -= other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

void HermitianMatrix::add_scaled(double s, const HermitianMatrix& other) {
  require_same_dim(dim(), other.dim(), "add_scaled");
  kernels::axpy(s, other.m_.re(), m_.re());
  kernels::axpy(s, other.m_.im(), m_.im());
}

HermitianMatrix congruence(const ComplexMatrix& v, std::span<const double> weights) {
  if (weights.size() != v.dim()) throw ArgumentError("congruence: weight count != dim");
  ComplexMatrix scaled = v;
  for (std::size_t j = 0; j < v.dim(); ++j) scaled.scale_column(j, weights[j]);
  return HermitianMatrix(scaled * v.adjoint());
}

HermitianMatrix sandwich(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "sandwich");
  return HermitianMatrix(a.entries() * b.entries() * a.entries());
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "hs_inner");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij Re(A_ij conj(B_ij)) for Hermitian B.
  return kernels::dot(a.entries().re(), b.entries().re()) +
         kernels::dot(a.entries().im(), b.entries().im());
}

}  // namespace qst
