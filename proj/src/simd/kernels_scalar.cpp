#include "kernels_impl.hpp"

#include <cmath>

namespace zsect::simd::scalar {

void horner_value(const double* cre, const double* cim, std::size_t ncoef, const double* xre,
                  const double* xim, std::size_t npts, double* out_re, double* out_im) {
  for (std::size_t i = 0; i < npts; ++i) {
    const double xr = xre[i];
    const double xi = xim[i];
    double pr = 0.0;
    double pi = 0.0;
    for (std::size_t k = ncoef; k-- > 0;) {
      const double t = pr * xr - pi * xi + cre[k];
      pi = pr * xi + pi * xr + cim[k];
      pr = t;
    }
    out_re[i] = pr;
    out_im[i] = pi;
  }
}

void horner_newton(const double* cre, const double* cim, const double* cabs, std::size_t ncoef,
                   const double* xre, const double* xim, std::size_t npts, double* p_re,
                   double* p_im, double* d_re, double* d_im, double* s) {
  for (std::size_t i = 0; i < npts; ++i) {
    const double xr = xre[i];
    const double xi = xim[i];
    const double ax = std::sqrt(xr * xr + xi * xi);
    double pr = 0.0, pi = 0.0, dr = 0.0, di = 0.0, sa = 0.0;
    for (std::size_t k = ncoef; k-- > 0;) {
      const double ndr = dr * xr - di * xi + pr;
      di = dr * xi + di * xr + pi;
      dr = ndr;
      const double npr = pr * xr - pi * xi + cre[k];
      pi = pr * xi + pi * xr + cim[k];
      pr = npr;
      sa = sa * ax + cabs[k];
    }
    p_re[i] = pr;
    p_im[i] = pi;
    d_re[i] = dr;
    d_im[i] = di;
    s[i] = sa;
  }
}

void aberth_sum(double z_re, double z_im, const double* zre, const double* zim, std::size_t n,
                std::size_t skip, double* out_re, double* out_im) {
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == skip) continue;
    const double dr = z_re - zre[j];
    const double di = z_im - zim[j];
    const double den = dr * dr + di * di;
    sr += dr / den;
    si -= di / den;
  }
  *out_re = sr;
  *out_im = si;
}

}  // namespace zsect::simd::scalar
