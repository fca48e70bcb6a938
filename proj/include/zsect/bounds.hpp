#pragma once

// Coefficient-based zero-location bounds (Cauchy, Van Vleck and their inner
// counterparts) and checkers for the classical identities and inequalities
// relating zeros and coefficients.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "zsect/polynomial.hpp"
#include "zsect/roots.hpp"

namespace zsect {

/// c * x^power with the coefficient stored as ln c.
struct LogTerm {
  double power = 0.0;
  double log_coeff = 0.0;
};

/// The unique u = ln x > -inf with sum_{lhs} c x^p = sum_{rhs} c x^p, where every lhs
/// power exceeds every rhs power (so the difference of the two log-sums is strictly
/// increasing in u). Bisection to 1e-3 in u, then safeguarded Newton.
/// Returns -inf if rhs is empty and +inf if lhs is empty.
double log_positive_root(std::span<const LogTerm> lhs, std::span<const LogTerm> rhs);

/// C_P: the positive root of |b_n| x^n = sum_{k<n} |b_k| x^k. +inf if b_n = 0, 0 if
/// b_k = 0 for all k < n. Throws DomainError for the zero polynomial.
double cauchy_bound(const Polynomial& p);

/// c_P: the positive root of |b_0| = sum_{k>=1} |b_k| y^k. Throws DomainError if b_0 = 0
/// or P is constant.
double inner_cauchy_bound(const Polynomial& p);

/// V^m_P: at least m zeros lie in |w| <= V^m_P. Requires 1 <= m <= n.
double van_vleck_bound(const Polynomial& p, std::size_t m);

struct InnerVanVleck {
  /// v^m_P; +inf when every referenced coefficient vanishes (no constraint).
  double value = 0.0;
  bool constrained = true;
  /// ln RHS - ln |b_0| of |b_0| <= C(n, m-1) max|b_k| max(1, v)^n; nonnegative.
  double log_slack = 0.0;
};

/// v^m_P: at least m zeros lie in |w| >= v^m_P. Requires b_0 != 0, 1 <= m <= n.
InnerVanVleck inner_van_vleck_bound(const Polynomial& p, std::size_t m);

/// ln C(n, k) via lgamma.
double log_binomial(std::size_t n, std::size_t k);

/// -(x ln x + (1-x) ln(1-x)), with H(0) = H(1) = 0.
double entropy(double x);

struct BoundsReport {
  double cauchy = 0.0;
  double inner_cauchy = 0.0;  // NaN when b_0 = 0
  std::map<std::size_t, double> van_vleck;
  std::map<std::size_t, double> inner_van_vleck;

  nlohmann::json to_json() const;
};

BoundsReport bounds_report(const Polynomial& p);

struct JensenResult {
  double lhs = 0.0;  // sum |ln|w||
  double rhs = 0.0;  // trapezoid quadrature of the log-modulus integrand
  /// Some zero lies within 1e-9 of the unit circle; compare at 1e-3 instead.
  bool near_unimodular = false;
  double tolerance() const { return near_unimodular ? 1e-3 : 1e-6; }
};

inline constexpr std::size_t kDefaultQuadPoints = std::size_t{1} << 12;

/// Both sides of sum |ln|w|| = (1/2pi) int ln(|P(e^it)|^2 / (|b_0||b_n|)) dt.
JensenResult jensen_identity(const Polynomial& p, const ZeroSet& z,
                             std::size_t quad_points = kDefaultQuadPoints);

struct WeakJensenResult {
  double lhs = 0.0;  // ln(T) (1 - F(T) + F(1/T))
  double rhs = 0.0;  // (1/n) times the Jensen integral
  bool holds(double slack = 1e-9) const { return lhs <= rhs + slack; }
};

/// Weak-type Jensen inequality for T > 1. Throws DomainError for T <= 1.
WeakJensenResult weak_jensen_check(const Polynomial& p, const ZeroSet& z, double T,
                                   std::size_t quad_points = kDefaultQuadPoints);

struct VieteReport {
  /// |prod |w| - |b_0|/|b_n|| / (|b_0|/|b_n|), or NaN when b_0 b_n = 0.
  double product_relative_error = 0.0;
  /// Per k: ln RHS - ln LHS of |b_k|/|b_n| <= C(n,k) prod_{j>k} |w_j|.
  std::map<std::size_t, double> upper_log_slack;
  /// Per k: ln RHS - ln LHS of prod_{j<=k} |w_j| <= C(n,k) |b_0|/|b_k|.
  std::map<std::size_t, double> lower_log_slack;
  std::vector<std::size_t> skipped;
  double min_slack() const;
};

VieteReport viete_checks(const Polynomial& p, const ZeroSet& z);

}  // namespace zsect
