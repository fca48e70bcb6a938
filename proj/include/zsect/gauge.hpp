#pragma once

// Finite-horizon estimates of the window maxima A_n(gamma), their n-th-root
// liminf L(gamma), the gauge G and the index Gamma. The liminf is replaced by a
// minimum over the tail window n in [N/2, N]; all n-th roots are taken in
// log-space so that vanishing and underflowing coefficients are exact.

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "zsect/series.hpp"

namespace zsect {

/// Gamma_hat is the smallest grid gamma with L_hat >= 1 - kIndexTolerance.
inline constexpr double kIndexTolerance = 0.05;

/// {0.02, 0.05, 0.1, 0.2, ..., 0.9, 0.99}.
std::vector<double> default_gamma_grid();

/// ceil((1 - gamma) n), robust to the representation error of 1 - gamma.
std::size_t window_start(std::size_t n, double gamma);

/// ln A_n(gamma) from ln|a_k| (k = 0..n at least); -inf when the window is all zero.
double log_window_max(std::span<const double> log_abs, std::size_t n, double gamma);

/// A_n(gamma). Requires n >= 1 and 0 < gamma < 1.
double window_max(const CoefficientStream& s, std::size_t n, double gamma);

/// min over n in [N/2, N] of A_n(gamma)^{1/n}, with 0^{1/n} = 0. `log_abs` holds
/// ln|a_k| for k = 0..N. Monotone-deque sliding maximum, O(N).
double l_estimate(std::span<const double> log_abs, double gamma, std::size_t horizon);

/// Requires N >= 64.
double L_estimate(const CoefficientStream& s, double gamma, std::size_t horizon);

struct GaugeReport {
  std::vector<double> gamma_grid;
  std::vector<double> L_raw;
  std::vector<double> L_hat;  // isotonic (pool-adjacent-violators) fit of L_raw
  double G_hat = 0.0;
  double Gamma_hat = 1.0;     // 1 when no grid point reaches the threshold
  std::size_t horizon = 0;
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;

  nlohmann::json to_json() const;
};

/// Grid must be sorted, strictly inside (0, 1). Grid points run in parallel.
GaugeReport gauge_and_index(const CoefficientStream& s, const std::vector<double>& gamma_grid,
                            std::size_t horizon, std::size_t workers = 0);

struct SzegoEstimate {
  double liminf_hat = 0.0;
  double limsup_hat = 0.0;
};

/// min and max of |a_n|^{1/n} over n in [N/2, N]. Requires N >= 64.
SzegoEstimate szego_condition(const CoefficientStream& s, std::size_t horizon);

/// Lower bound 1 - ln(1/G)/ln(T) for liminf F_n(T) of a series with gauge G.
/// Requires 0 < G <= 1 and T > 1/G.
double gauge_envelope(double G, double T);

/// L_estimate at gamma close to 1 (default 0.99); values well below 1 flag
/// infinite Ostrowsky gaps.
double infinite_gap_diagnostic(const CoefficientStream& s, std::size_t horizon, double gamma = 0.99);

/// For 0/1 coefficients: m(n) = largest marked index <= n, and m(n)/n, which is the
/// finite mass of rho_n (the rest sits at infinity).
struct ZeroOneProfile {
  std::size_t n = 0;
  std::size_t m_n = 0;
  double ratio = 0.0;
};

/// Throws DomainError if some a_k (k <= n) is neither 0 nor 1, or a_0 = 0, or n = 0.
ZeroOneProfile zero_one_profile(const CoefficientStream& s, std::size_t n);

}  // namespace zsect
