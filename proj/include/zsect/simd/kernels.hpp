#pragma once

// Data-parallel inner loops of the root finder and the quadrature/sampling
// code. Every kernel has a scalar reference; vector variants are selected at
// runtime and must agree with the reference to rounding (see test_simd.cpp).
//
// All arrays are struct-of-arrays doubles. Coefficient arrays hold
// c_0..c_{ncoef-1} in increasing power order.

#include <cstddef>

namespace zsect::simd {

/// out[i] = P(x_i).
using HornerValueFn = void (*)(const double* cre, const double* cim, std::size_t ncoef,
                               const double* xre, const double* xim, std::size_t npts,
                               double* out_re, double* out_im);

/// P(x_i), P'(x_i) and S(x_i) = sum_k |c_k| |x_i|^k in one pass.
using HornerNewtonFn = void (*)(const double* cre, const double* cim, const double* cabs,
                                std::size_t ncoef, const double* xre, const double* xim,
                                std::size_t npts, double* p_re, double* p_im, double* d_re,
                                double* d_im, double* s);

/// sum over j != skip of 1 / (z - z_j).
using AberthSumFn = void (*)(double z_re, double z_im, const double* zre, const double* zim,
                             std::size_t n, std::size_t skip, double* out_re, double* out_im);

struct KernelTable {
  const char* name;
  HornerValueFn horner_value;
  HornerNewtonFn horner_newton;
  AberthSumFn aberth_sum;
};

const KernelTable& scalar_kernels();

/// AVX2+FMA kernels, or nullptr when not built for this target or the CPU lacks them.
const KernelTable* avx2_kernels();

/// Kernel set used by the library. Chosen once: the widest supported set, unless
/// the ZSECT_SIMD environment variable is "scalar".
const KernelTable& active_kernels();

}  // namespace zsect::simd
