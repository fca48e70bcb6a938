#pragma once

#include "zsect/simd/kernels.hpp"

namespace zsect::simd {

namespace scalar {
void horner_value(const double* cre, const double* cim, std::size_t ncoef, const double* xre,
                  const double* xim, std::size_t npts, double* out_re, double* out_im);
void horner_newton(const double* cre, const double* cim, const double* cabs, std::size_t ncoef,
                   const double* xre, const double* xim, std::size_t npts, double* p_re,
                   double* p_im, double* d_re, double* d_im, double* s);
void aberth_sum(double z_re, double z_im, const double* zre, const double* zim, std::size_t n,
                std::size_t skip, double* out_re, double* out_im);
}  // namespace scalar

#if defined(ZSECT_HAVE_AVX2)
namespace avx2 {
void horner_value(const double* cre, const double* cim, std::size_t ncoef, const double* xre,
                  const double* xim, std::size_t npts, double* out_re, double* out_im);
void horner_newton(const double* cre, const double* cim, const double* cabs, std::size_t ncoef,
                   const double* xre, const double* xim, std::size_t npts, double* p_re,
                   double* p_im, double* d_re, double* d_im, double* s);
void aberth_sum(double z_re, double z_im, const double* zre, const double* zim, std::size_t n,
                std::size_t skip, double* out_re, double* out_im);
}  // namespace avx2
#endif

}  // namespace zsect::simd
