#include "zsect/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zsect {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(Complex{0.0, 0.0});
}

Polynomial::Polynomial(std::vector<Complex> coeffs, std::size_t formal_degree)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() > formal_degree + 1) {
    for (std::size_t k = formal_degree + 1; k < coeffs_.size(); ++k) {
      if (std::abs(coeffs_[k]) > kDropTolerance)
        throw DomainError("polynomial has nonzero coefficient beyond its formal degree");
    }
  }
  coeffs_.resize(formal_degree + 1, Complex{0.0, 0.0});
}

Polynomial Polynomial::from_real(const std::vector<double>& coeffs) {
  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  return Polynomial(std::move(c));
}

long Polynomial::degree() const {
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    if (std::abs(coeffs_[k]) > kDropTolerance) return static_cast<long>(k);
  }
  return -1;
}

std::size_t Polynomial::origin_multiplicity() const {
  std::size_t k = 0;
  while (k < coeffs_.size() && std::abs(coeffs_[k]) <= kDropTolerance) ++k;
  return k;
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
  return acc;
}

Polynomial reversed_companion(const Polynomial& p) {
  std::vector<Complex> c(p.coeffs().rbegin(), p.coeffs().rend());
  return Polynomial(std::move(c));
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  std::vector<Complex> c(a.coeffs().size() + b.coeffs().size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a[i] * b[j];
  }
  return Polynomial(std::move(c));
}

Complex ScaledTerm::value() const { return unit * std::exp(log_abs); }

SparsePolynomial::SparsePolynomial(std::vector<ScaledTerm> terms, std::size_t formal_degree)
    : terms_(std::move(terms)), formal_degree_(formal_degree) {
  std::sort(terms_.begin(), terms_.end(),
            [](const ScaledTerm& a, const ScaledTerm& b) { return a.power < b.power; });
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    if (terms_[i].power == terms_[i - 1].power)
      throw DomainError("sparse polynomial has duplicate powers");
  }
  if (!terms_.empty() && terms_.back().power > formal_degree_)
    throw DomainError("sparse polynomial term beyond its formal degree");
}

SparsePolynomial SparsePolynomial::from_dense(const Polynomial& p) {
  std::vector<ScaledTerm> terms;
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    const double a = std::abs(p[k]);
    if (a <= kDropTolerance) continue;
    terms.push_back({k, p[k] / a, std::log(a)});
  }
  return SparsePolynomial(std::move(terms), p.formal_degree());
}

void SparsePolynomial::append(const std::vector<ScaledTerm>& terms, std::size_t new_formal_degree) {
  for (const auto& t : terms) {
    if (!terms_.empty() && t.power <= terms_.back().power)
      throw DomainError("appended terms must extend past the current degree");
    terms_.push_back(t);
  }
  if (new_formal_degree < formal_degree_ || (!terms_.empty() && terms_.back().power > new_formal_degree))
    throw DomainError("formal degree cannot shrink below the support");
  formal_degree_ = new_formal_degree;
}

double SparsePolynomial::log_abs_at(Complex z) const {
  if (terms_.empty()) return -std::numeric_limits<double>::infinity();
  const double r = std::abs(z);
  if (r == 0.0) {
    return terms_.front().power == 0 ? terms_.front().log_abs
                                     : -std::numeric_limits<double>::infinity();
  }
  const double lr = std::log(r);
  const double arg = std::arg(z);
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) top = std::max(top, t.log_abs + static_cast<double>(t.power) * lr);
  Complex acc{0.0, 0.0};
  for (const auto& t : terms_) {
    const double mag = std::exp(t.log_abs + static_cast<double>(t.power) * lr - top);
    acc += t.unit * std::polar(mag, static_cast<double>(t.power) * arg);
  }
  return top + std::log(std::abs(acc));
}

double SparsePolynomial::log_abs_sum_at(double radius) const {
  if (terms_.empty()) return -std::numeric_limits<double>::infinity();
  if (radius == 0.0) {
    return terms_.front().power == 0 ? terms_.front().log_abs
                                     : -std::numeric_limits<double>::infinity();
  }
  const double lr = std::log(radius);
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) top = std::max(top, t.log_abs + static_cast<double>(t.power) * lr);
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (const auto& t : terms_) acc += std::exp(t.log_abs + static_cast<double>(t.power) * lr - top);
  return top + std::log(acc);
}

Polynomial SparsePolynomial::to_dense() const {
  std::vector<Complex> c(formal_degree_ + 1, Complex{0.0, 0.0});
  for (const auto& t : terms_) c[t.power] = t.value();
  return Polynomial(std::move(c));
}

}  // namespace zsect
