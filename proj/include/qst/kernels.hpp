#pragma once

// Dense inner loops over planar complex storage (separate real and imaginary
// arrays, row-major). Every routine has a portable scalar reference and, on
// x86-64 builds, an AVX2/FMA variant. The active set is chosen once at
// startup from CPUID; QST_KERNELS=scalar in the environment forces the
// reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace qst::kernels {

struct KernelSet {
  std::string_view name;

  /// Sum of x[i] * y[i].
  double (*dot)(const double* x, const double* y, std::size_t n);

  /// y[i] += a * x[i].
  void (*axpy)(double a, const double* x, double* y, std::size_t n);

  /// C = A * B for square m x m complex matrices in planar row-major layout.
  /// C must not alias A or B.
  void (*cgemm)(std::size_t m, const double* a_re, const double* a_im,
                const double* b_re, const double* b_im, double* c_re,
                double* c_im);
};

const KernelSet& scalar();

/// Null when the build or the CPU lacks AVX2+FMA.
const KernelSet* avx2();

/// The set used by the library. Stable for the lifetime of the process.
const KernelSet& active();

/// Overrides the active set (tests and benchmarks). Not thread-safe with
/// concurrent library calls.
void set_active(const KernelSet& set);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace qst::kernels
