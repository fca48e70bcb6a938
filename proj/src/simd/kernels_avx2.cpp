// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace zsect::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Adds sum_j 1/(z - z_j) over [begin, end) into the vector accumulators.
inline void accumulate_inverse(__m256d zr, __m256d zi, const double* zre, const double* zim,
                               std::size_t begin, std::size_t end, __m256d& acc_re,
                               __m256d& acc_im, double& tail_re, double& tail_im) {
  std::size_t j = begin;
  for (; j + 4 <= end; j += 4) {
    const __m256d dr = _mm256_sub_pd(zr, _mm256_loadu_pd(zre + j));
    const __m256d di = _mm256_sub_pd(zi, _mm256_loadu_pd(zim + j));
    const __m256d den = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
    acc_re = _mm256_add_pd(acc_re, _mm256_div_pd(dr, den));
    acc_im = _mm256_sub_pd(acc_im, _mm256_div_pd(di, den));
  }
  const double z_re = _mm256_cvtsd_f64(zr);
  const double z_im = _mm256_cvtsd_f64(zi);
  for (; j < end; ++j) {
    const double dr = z_re - zre[j];
    const double di = z_im - zim[j];
    const double den = dr * dr + di * di;
    tail_re += dr / den;
    tail_im -= di / den;
  }
}

}  // namespace

void horner_value(const double* cre, const double* cim, std::size_t ncoef, const double* xre,
                  const double* xim, std::size_t npts, double* out_re, double* out_im) {
  std::size_t i = 0;
  for (; i + 4 <= npts; i += 4) {
    const __m256d xr = _mm256_loadu_pd(xre + i);
    const __m256d xi = _mm256_loadu_pd(xim + i);
    __m256d pr = _mm256_setzero_pd();
    __m256d pi = _mm256_setzero_pd();
    for (std::size_t k = ncoef; k-- > 0;) {
      const __m256d t = _mm256_fmsub_pd(pr, xr, _mm256_fmsub_pd(pi, xi, _mm256_set1_pd(cre[k])));
      pi = _mm256_fmadd_pd(pr, xi, _mm256_fmadd_pd(pi, xr, _mm256_set1_pd(cim[k])));
      pr = t;
    }
    _mm256_storeu_pd(out_re + i, pr);
    _mm256_storeu_pd(out_im + i, pi);
  }
  if (i < npts) scalar::horner_value(cre, cim, ncoef, xre + i, xim + i, npts - i, out_re + i, out_im + i);
}

void horner_newton(const double* cre, const double* cim, const double* cabs, std::size_t ncoef,
                   const double* xre, const double* xim, std::size_t npts, double* p_re,
                   double* p_im, double* d_re, double* d_im, double* s) {
  std::size_t i = 0;
  for (; i + 4 <= npts; i += 4) {
    const __m256d xr = _mm256_loadu_pd(xre + i);
    const __m256d xi = _mm256_loadu_pd(xim + i);
    const __m256d ax = _mm256_sqrt_pd(_mm256_fmadd_pd(xr, xr, _mm256_mul_pd(xi, xi)));
    __m256d pr = _mm256_setzero_pd();
    __m256d pi = _mm256_setzero_pd();
    __m256d dr = _mm256_setzero_pd();
    __m256d di = _mm256_setzero_pd();
    __m256d sa = _mm256_setzero_pd();
    for (std::size_t k = ncoef; k-- > 0;) {
      const __m256d ndr = _mm256_fmsub_pd(dr, xr, _mm256_fmsub_pd(di, xi, pr));
      di = _mm256_fmadd_pd(dr, xi, _mm256_fmadd_pd(di, xr, pi));
      dr = ndr;
      const __m256d npr = _mm256_fmsub_pd(pr, xr, _mm256_fmsub_pd(pi, xi, _mm256_set1_pd(cre[k])));
      pi = _mm256_fmadd_pd(pr, xi, _mm256_fmadd_pd(pi, xr, _mm256_set1_pd(cim[k])));
      pr = npr;
      sa = _mm256_fmadd_pd(sa, ax, _mm256_set1_pd(cabs[k]));
    }
    _mm256_storeu_pd(p_re + i, pr);
    _mm256_storeu_pd(p_im + i, pi);
    _mm256_storeu_pd(d_re + i, dr);
    _mm256_storeu_pd(d_im + i, di);
    _mm256_storeu_pd(s + i, sa);
  }
  if (i < npts) {
    scalar::horner_newton(cre, cim, cabs, ncoef, xre + i, xim + i, npts - i, p_re + i, p_im + i,
                          d_re + i, d_im + i, s + i);
  }
}

void aberth_sum(double z_re, double z_im, const double* zre, const double* zim, std::size_t n,
                std::size_t skip, double* out_re, double* out_im) {
  const __m256d zr = _mm256_set1_pd(z_re);
  const __m256d zi = _mm256_set1_pd(z_im);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  double tail_re = 0.0;
  double tail_im = 0.0;
  const std::size_t cut = skip < n ? skip : n;
  accumulate_inverse(zr, zi, zre, zim, 0, cut, acc_re, acc_im, tail_re, tail_im);
  if (cut + 1 < n) accumulate_inverse(zr, zi, zre, zim, cut + 1, n, acc_re, acc_im, tail_re, tail_im);
  *out_re = hsum(acc_re) + tail_re;
  *out_im = hsum(acc_im) + tail_im;
}

}  // namespace zsect::simd::avx2
