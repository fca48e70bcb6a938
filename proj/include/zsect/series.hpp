#pragma once

// Coefficient streams for power series with radius of convergence 1, and the
// sections built from them.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsect/ensembles.hpp"
#include "zsect/polynomial.hpp"

namespace zsect {

enum class Family {
  geometric,             // 1/(1-z)
  inverse_one_minus_zN,  // 1/(1-z^N)
  lacunary,              // sum z^{q^k}
  factorial_gaps,        // sum z^{k!}
  rational,              // P/Q, roots of Q on the unit circle
  zero_one,              // 0/1 coefficients from an index rule
  carlson_lemma,         // prescribed index t and gauge g
  explicit_list,         // finite list, zero beyond it
  random,                // one seeded path of an ensemble
};

enum class ZeroOneRule { squares, primes, indices };

/// Deterministic source of coefficients a_n. Immutable; safe to share between threads.
class CoefficientStream {
 public:
  static CoefficientStream geometric();
  static CoefficientStream inverse_one_minus_zN(std::size_t period);
  static CoefficientStream lacunary(std::size_t base);
  static CoefficientStream factorial_gaps();
  /// Throws DomainError unless every root of `denominator` lies on the unit circle.
  static CoefficientStream rational(std::vector<Complex> numerator, std::vector<Complex> denominator);
  static CoefficientStream zero_one(ZeroOneRule rule, std::vector<std::size_t> indices = {});
  /// Throws DomainError unless 0 < t <= 1 and 0 <= g < 1.
  static CoefficientStream carlson_lemma(double t, double g);
  static CoefficientStream explicit_list(std::vector<Complex> coeffs);
  static CoefficientStream random(const Ensemble& ensemble, std::uint64_t seed);

  Family family() const { return family_; }

  Complex coeff(std::size_t k) const;
  /// a_0 .. a_{count-1}.
  std::vector<Complex> coefficients(std::size_t count) const;
  /// ln|a_k| for k < count, -inf for vanishing coefficients. Exact where a_k underflows.
  std::vector<double> log_abs(std::size_t count) const;

  nlohmann::json to_json() const;
  static CoefficientStream from_json(const nlohmann::json& j);
  /// Compact command-line form: "geometric", "lacunary:2", "carlson_lemma:0.3:0.6", "{...json...}".
  static CoefficientStream parse(const std::string& text);

  // Family parameters, meaningful for the matching family only.
  std::size_t integer_param() const { return integer_param_; }
  double t() const { return t_; }
  double g() const { return g_; }

 private:
  CoefficientStream() = default;
  bool is_marked(std::size_t k) const;

  Family family_ = Family::geometric;
  std::size_t integer_param_ = 0;
  double t_ = 0.0;
  double g_ = 0.0;
  ZeroOneRule rule_ = ZeroOneRule::squares;
  std::vector<std::size_t> indices_;  // sorted marked indices (zero_one indices rule)
  std::vector<Complex> list_;         // explicit list, or rational numerator
  std::vector<Complex> denominator_;
  Ensemble ensemble_;
  std::uint64_t seed_ = 0;
};

/// s_n: the degree-n formal section, coefficient k = a_k for k <= n.
Polynomial section(const CoefficientStream& stream, std::size_t n);

/// The increasing sequence m_1 < m_2 < ... of marked indices of the index/gauge
/// construction, up to and including `limit`. For t < 1: m_1 = 2 and
/// m_k = max(m_{k-1} + 1, round(m_{k-1} / (1 - t))); for t = 1: m_k = k!.
std::vector<std::size_t> carlson_sequence(double t, std::size_t limit);

/// Coefficient n of the series with index t and gauge g: 1 on the marked
/// sequence, g^n elsewhere.
double carlson_coeff(double t, double g, std::size_t n);

/// Reads "re,im" (or "re") per line.
std::vector<Complex> read_coefficients_csv(std::istream& in);

}  // namespace zsect
