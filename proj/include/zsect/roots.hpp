#pragma once

#include <cstddef>
#include <vector>

#include "zsect/polynomial.hpp"

namespace zsect {

/// Zeros of a polynomial relative to its formal degree n. Zeros at the origin
/// appear in finite_zeros as exact 0; the deficit n - deg(P) sits at infinity.
struct ZeroSet {
  std::vector<Complex> finite_zeros;
  std::size_t infinity_count = 0;
  std::size_t formal_degree = 0;
};

inline constexpr double kDefaultRootTol = 1e-10;

/// All n zeros by simultaneous (Aberth-Ehrlich) iteration. Every finite zero w
/// satisfies |P(w)| <= tol * sum_k |b_k| |w|^k. Zeros at 0 and infinity are
/// deflated exactly before iterating. On non-convergence the variable is rescaled
/// by the Cauchy radius and the iteration restarted once; a second failure throws
/// NonConvergenceError carrying the worst residual.
ZeroSet find_zeros(const Polynomial& p, double tol = kDefaultRootTol);

/// Same contract for extended-range sparse polynomials.
ZeroSet find_zeros(const SparsePolynomial& p, double tol = kDefaultRootTol);

/// |w_1| <= ... <= |w_n|, with +inf for each zero at infinity.
std::vector<double> sorted_moduli(const ZeroSet& z);

/// |P(w)| / sum_k |b_k| |w|^k, evaluated without overflow.
double backward_error(const Polynomial& p, Complex w);
double backward_error(const SparsePolynomial& p, Complex w);

/// Starting points on the circles of the Newton polygon of (k, ln|c_k|).
/// `log_abs[k]` is -inf for missing powers; c_0 and c_d must be nonzero.
/// Radii are clamped into [lower, upper].
std::vector<Complex> newton_polygon_start(const std::vector<double>& log_abs, double lower,
                                          double upper, double phase);

}  // namespace zsect
