#include "kernels_impl.hpp"

#include <algorithm>

namespace qst::kernels::detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void cgemm_scalar(std::size_t m, const double* a_re, const double* a_im,
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
      for (std::size_t j = 0; j < m; ++j) {
        cr[j] += ar * br[j] - ai * bi[j];
        ci[j] += ar * bi[j] + ai * br[j];
      }
    }
  }
}

}  // namespace qst::kernels::detail
