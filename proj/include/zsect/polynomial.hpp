#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace zsect {

using Complex = std::complex<double>;

/// Raised when an input lies outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the root finder when the iteration fails after its retry policy.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Raised when a numerical audit falsifies a constructed object.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients with |b| at or below this are treated as exact zeros.
inline constexpr double kDropTolerance = 1e-300;

/// Dense polynomial b_0 + b_1 z + ... + b_n z^n with an explicit formal degree n.
/// Trailing coefficients may vanish; the deficit n - deg(P) is a zero at infinity.
class Polynomial {
 public:
  Polynomial() : coeffs_(1, Complex{0.0, 0.0}) {}
  explicit Polynomial(std::vector<Complex> coeffs);
  Polynomial(std::vector<Complex> coeffs, std::size_t formal_degree);
  static Polynomial from_real(const std::vector<double>& coeffs);

  std::size_t formal_degree() const { return coeffs_.size() - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  const Complex& operator[](std::size_t k) const { return coeffs_[k]; }

  /// Largest k with |b_k| above the drop tolerance; -1 for the zero polynomial.
  long degree() const;
  /// Number of low-order coefficients below the drop tolerance (zeros at the origin).
  std::size_t origin_multiplicity() const;
  bool is_zero() const { return degree() < 0; }

  Complex operator()(Complex z) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<Complex> coeffs_;
};

/// z^n P(1/z) with respect to the formal degree n: coefficient k becomes b_{n-k}.
Polynomial reversed_companion(const Polynomial& p);

/// Product of two polynomials; formal degrees add.
Polynomial multiply(const Polynomial& a, const Polynomial& b);

/// One term c z^power of a sparse polynomial, with c = unit * exp(log_abs), |unit| = 1.
/// The split keeps coefficients far outside double range representable.
struct ScaledTerm {
  std::size_t power = 0;
  Complex unit{1.0, 0.0};
  double log_abs = 0.0;

  Complex value() const;
};

/// Sparse polynomial with extended-range coefficients. Terms are kept sorted by
/// power with no duplicates.
class SparsePolynomial {
 public:
  SparsePolynomial() = default;
  SparsePolynomial(std::vector<ScaledTerm> terms, std::size_t formal_degree);
  static SparsePolynomial from_dense(const Polynomial& p);

  std::size_t formal_degree() const { return formal_degree_; }
  const std::vector<ScaledTerm>& terms() const { return terms_; }
  long degree() const { return terms_.empty() ? -1 : static_cast<long>(terms_.back().power); }

  /// Adds terms whose powers all exceed the current degree.
  void append(const std::vector<ScaledTerm>& terms, std::size_t new_formal_degree);

  /// ln|P(z)| evaluated by log-sum-exp over the terms; -inf where P vanishes.
  double log_abs_at(Complex z) const;
  /// ln of sum |c_k| |z|^k.
  double log_abs_sum_at(double radius) const;

  /// Dense copy; coefficients below double range flush to zero.
  Polynomial to_dense() const;

 private:
  std::vector<ScaledTerm> terms_;
  std::size_t formal_degree_ = 0;
};

}  // namespace zsect
