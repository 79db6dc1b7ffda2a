#pragma once

#include <cstddef>

namespace qst::kernels::detail {

double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void cgemm_scalar(std::size_t m, const double* a_re, const double* a_im,
                  const double* b_re, const double* b_im, double* c_re,
                  double* c_im);

#ifdef QST_HAVE_AVX2
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void cgemm_avx2(std::size_t m, const double* a_re, const double* a_im,
                const double* b_re, const double* b_im, double* c_re,
                double* c_im);
#endif

}  // namespace qst::kernels::detail
