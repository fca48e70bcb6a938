#pragma once

// Radial zero-counting measures on [0, inf], their distribution functions, the
// Levy distance used for weak convergence, and angular (Weyl) statistics.

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "zsect/polynomial.hpp"
#include "zsect/roots.hpp"

namespace zsect {

struct RadialAtom {
  double radius = 0.0;  // may be +inf
  double weight = 0.0;
};

/// Finite atomic measure on the compactified half-line. Atoms are sorted by radius
/// with equal radii merged and all weights positive.
class RadialMeasure {
 public:
  RadialMeasure() = default;
  /// Throws DomainError for negative radii or negative weights. Zero weights are dropped.
  static RadialMeasure from_atoms(std::vector<RadialAtom> atoms);
  static RadialMeasure dirac(double radius);
  /// (1/m) sum delta_{r_j}.
  static RadialMeasure uniform(const std::vector<double>& radii);

  const std::vector<RadialAtom>& atoms() const { return atoms_; }
  double total_weight() const { return total_; }
  bool is_probability(double tol = 1e-9) const;

  /// Mass of [0, t]; t = +inf includes the atom at infinity.
  double cdf(double t) const;
  double mass_at_infinity() const;

  nlohmann::json to_json() const;

 private:
  std::vector<RadialAtom> atoms_;
  double total_ = 0.0;
};

/// t / (1 + t), with +inf mapped to 1.
double compactify(double t);

/// rho_n: weight 1/n at |w| for each finite zero, infinity_count/n at infinity.
/// Throws DomainError when the formal degree is 0.
RadialMeasure radial_projection(const ZeroSet& z);

/// F_n(t): fraction of the n zeros with |w| <= t.
double counting_fn(const ZeroSet& z, double t);

/// Levy distance between the pushforwards of two probability measures under
/// compactify(): the least eps with F(x - eps) - eps <= G(x) <= F(x + eps) + eps
/// for all x. Bisection on eps over the exact step-function feasibility test.
/// Throws DomainError unless both inputs are probability measures.
double levy_distance(const RadialMeasure& mu, const RadialMeasure& nu);

/// (1/n) sum over finite nonzero zeros of exp(-i m theta(w)). Zeros at 0 contribute 0.
Complex weyl_sum(const ZeroSet& z, std::size_t m);

/// sum over the zeros of s_n of w^{-m}, from a_0..a_m alone via Newton's identities on
/// the reversed companion. Coefficients are normalised by a_0; missing ones count as 0.
/// Throws DomainError if a_0 = 0 or m = 0.
Complex power_sum_newton(std::span<const Complex> a, std::size_t m);

/// Terms of the bound |weyl_sum| <= |(1/n) sum w^{-m}| + F(1/T)(r^{-m} - 1) + (T^m - 1)
/// + (1 - F(T)) + (1 - T^{-m}), where r is the smallest modulus among finite zeros.
struct WeylChain {
  Complex weyl{0.0, 0.0};
  Complex power_part{0.0, 0.0};  // (1/n) sum w^{-m} from Newton's identities
  double inner_term = 0.0;       // F(1/T)(r^{-m} - 1)
  double annulus_term = 0.0;     // (T^m - 1) + (1 - T^{-m})
  double outer_term = 0.0;       // 1 - F(T)
  double bound() const { return std::abs(power_part) + inner_term + annulus_term + outer_term; }
  bool holds(double slack = 1e-9) const { return std::abs(weyl) <= bound() + slack; }
};

/// Requires a_0 != 0 and T > 1.
WeylChain weyl_chain(const Polynomial& p, const ZeroSet& z, std::size_t m, double T);

}  // namespace zsect
