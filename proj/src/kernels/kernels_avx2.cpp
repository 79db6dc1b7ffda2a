// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <algorithm>

#include "kernels_impl.hpp"

namespace qst::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4),
                           acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void cgemm_avx2(std::size_t m, const double* a_re, const double* a_im,
                const double* b_re, const double* b_im, double* c_re,
                double* c_im) {
  std::fill(c_re, c_re + m * m, 0.0);
  std::fill(c_im, c_im + m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* cr = c_re + i * m;
    double* ci = c_im + i * m;
    for (std::size_t k = 0; k < m; ++k) {
      const double ar = a_re[i * m + k];
      const double ai = a_im[i * m + k];
      if (ar == 0.0 && ai == 0.0) continue;
      const double* br = b_re + k * m;
      const double* bi = b_im + k * m;
      const __m256d var = _mm256_set1_pd(ar);
      const __m256d vai = _mm256_set1_pd(ai);
      std::size_t j = 0;
      for (; j + 4 <= m; j += 4) {
        const __m256d vbr = _mm256_loadu_pd(br + j);
        const __m256d vbi = _mm256_loadu_pd(bi + j);
        __m256d vcr = _mm256_loadu_pd(cr + j);
        __m256d vci = _mm256_loadu_pd(ci + j);
        vcr = _mm256_fmadd_pd(var, vbr, vcr);
        vcr = _mm256_fnmadd_pd(vai, vbi, vcr);
        vci = _mm256_fmadd_pd(var, vbi, vci);
        vci = _mm256_fmadd_pd(vai, vbr, vci);
        _mm256_storeu_pd(cr + j, vcr);
        _mm256_storeu_pd(ci + j, vci);
      }
      for (; j < m; ++j) {
        cr[j] += ar * br[j] - ai * bi[j];
        ci[j] += ar * bi[j] + ai * br[j];
      }
    }
  }
}

}  // namespace qst::kernels::detail
