#include "zsect/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zsect/json_util.hpp"
#include "zsect/simd/kernels.hpp"

namespace zsect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LogSum {
  double value;  // ln sum c x^p
  double mean_power;
};

LogSum log_sum(std::span<const LogTerm> terms, double u) {
  double top = -kInf;
  for (const auto& t : terms) top = std::max(top, t.log_coeff + t.power * u);
  double s = 0.0, sp = 0.0;
  for (const auto& t : terms) {
    const double w = std::exp(t.log_coeff + t.power * u - top);
    s += w;
    sp += w * t.power;
  }
  return {top + std::log(s), sp / s};
}

double log_abs_or_neg_inf(Complex b) {
  const double a = std::abs(b);
  return a > kDropTolerance ? std::log(a) : -kInf;
}

std::size_t require_nonconstant(const Polynomial& p) {
  if (p.is_zero()) throw DomainError("bounds: zero polynomial");
  return p.formal_degree();
}

}  // namespace

double log_positive_root(std::span<const LogTerm> lhs, std::span<const LogTerm> rhs) {
  if (rhs.empty()) return -kInf;
  if (lhs.empty()) return kInf;
  auto f = [&](double u) { return log_sum(lhs, u).value - log_sum(rhs, u).value; };

  // Bracket by doubling steps away from u = 0.
  double lo = 0.0, hi = 0.0;
  if (f(0.0) < 0.0) {
    double step = 1.0;
    do {
      lo = hi;
      hi += step;
      step *= 2.0;
    } while (f(hi) < 0.0);
  } else {
    double step = 1.0;
    do {
      hi = lo;
      lo -= step;
      step *= 2.0;
    } while (f(lo) >= 0.0);
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }

  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const LogSum a = log_sum(lhs, u);
    const LogSum b = log_sum(rhs, u);
    const double fu = a.value - b.value;
    if (fu == 0.0) return u;
    (fu < 0.0 ? lo : hi) = u;
    double next = u - fu / (a.mean_power - b.mean_power);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u))) return next;
    u = next;
  }
  return u;
}

double cauchy_bound(const Polynomial& p) {
  const std::size_t n = require_nonconstant(p);
  const double lead = log_abs_or_neg_inf(p[n]);
  if (lead == -kInf) return kInf;
  std::vector<LogTerm> rhs;
  for (std::size_t k = 0; k < n; ++k)
    if (const double l = log_abs_or_neg_inf(p[k]); l > -kInf) rhs.push_back({double(k), l});
  const std::vector<LogTerm> lhs{{double(n), lead}};
  return std::exp(log_positive_root(lhs, rhs));
}

double inner_cauchy_bound(const Polynomial& p) {
  const std::size_t n = require_nonconstant(p);
  const double b0 = log_abs_or_neg_inf(p[0]);
  if (b0 == -kInf) throw DomainError("inner_cauchy_bound: b_0 = 0, deflate origin zeros first");
  std::vector<LogTerm> lhs;
  for (std::size_t k = 1; k <= n; ++k)
    if (const double l = log_abs_or_neg_inf(p[k]); l > -kInf) lhs.push_back({double(k), l});
  if (lhs.empty()) throw DomainError("inner_cauchy_bound: constant polynomial");
  const std::vector<LogTerm> rhs{{0.0, b0}};
  return std::exp(log_positive_root(lhs, rhs));
}

double van_vleck_bound(const Polynomial& p, std::size_t m) {
  const std::size_t n = require_nonconstant(p);
  if (m < 1 || m > n) throw DomainError("van_vleck_bound: m must lie in [1, n]");
  const double lead = log_abs_or_neg_inf(p[n]);
  if (lead == -kInf) return kInf;
  std::vector<LogTerm> rhs;
  for (std::size_t j = 0; j < m; ++j) {
    const double l = log_abs_or_neg_inf(p[j]);
    if (l > -kInf) rhs.push_back({double(j), l + log_binomial(n - j - 1, m - j - 1)});
  }
  const std::vector<LogTerm> lhs{{double(n), lead}};
  return std::exp(log_positive_root(lhs, rhs));
}

InnerVanVleck inner_van_vleck_bound(const Polynomial& p, std::size_t m) {
  const std::size_t n = require_nonconstant(p);
  if (m < 1 || m > n) throw DomainError("inner_van_vleck_bound: m must lie in [1, n]");
  const double b0 = log_abs_or_neg_inf(p[0]);
  if (b0 == -kInf) throw DomainError("inner_van_vleck_bound: b_0 = 0");
  std::vector<LogTerm> lhs;
  double log_max = -kInf;
  for (std::size_t k = n - m + 1; k <= n; ++k) {
    const double l = log_abs_or_neg_inf(p[k]);
    if (l == -kInf) continue;
    log_max = std::max(log_max, l);
    lhs.push_back({double(k), l + log_binomial(k - 1, k - (n - m) - 1)});
  }
  InnerVanVleck out;
  if (lhs.empty()) {
    out.value = kInf;
    out.constrained = false;
    out.log_slack = kInf;
    return out;
  }
  const std::vector<LogTerm> rhs{{0.0, b0}};
  const double u = log_positive_root(lhs, rhs);
  out.value = std::exp(u);
  out.log_slack = log_binomial(n, m - 1) + log_max + double(n) * std::max(0.0, u) - b0;
  return out;
}

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) return -kInf;
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0);
}

double entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("entropy: argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -(x * std::log(x) + (1.0 - x) * std::log1p(-x));
}

nlohmann::json BoundsReport::to_json() const {
  nlohmann::json j;
  j["cauchy"] = json_number(cauchy);
  j["inner_cauchy"] = json_number(inner_cauchy);
  auto& vv = j["van_vleck"] = nlohmann::json::object();
  for (const auto& [m, v] : van_vleck) vv[std::to_string(m)] = json_number(v);
  auto& ivv = j["inner_van_vleck"] = nlohmann::json::object();
  for (const auto& [m, v] : inner_van_vleck) ivv[std::to_string(m)] = json_number(v);
  return j;
}

BoundsReport bounds_report(const Polynomial& p) {
  const std::size_t n = require_nonconstant(p);
  BoundsReport r;
  r.cauchy = cauchy_bound(p);
  const bool b0 = std::abs(p[0]) > kDropTolerance;
  const bool constant = p.degree() == 0;
  r.inner_cauchy = (b0 && !constant) ? inner_cauchy_bound(p) : std::nan("");
  for (std::size_t m = 1; m <= n; ++m) {
    r.van_vleck[m] = van_vleck_bound(p, m);
    if (b0) r.inner_van_vleck[m] = inner_van_vleck_bound(p, m).value;
  }
  return r;
}

namespace {

// (1/2pi) int ln(|P(e^it)|^2 / (|b_0||b_n|)) dt by the trapezoid rule.
double jensen_integral(const Polynomial& p, std::size_t quad_points) {
  const std::size_t n = p.formal_degree();
  const std::size_t m = n + 1;
  std::vector<double> cre(m), cim(m);
  for (std::size_t k = 0; k < m; ++k) {
    cre[k] = p[k].real();
    cim[k] = p[k].imag();
  }
  std::vector<double> xre(quad_points), xim(quad_points), ore(quad_points), oim(quad_points);
  // Nodes rotated by an irrational fraction of a step, so no node lands on a root of
  // unity (where the integrand is -inf). Accuracy of the periodic rule is unaffected.
  const double shift = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t j = 0; j < quad_points; ++j) {
    const double th = 2.0 * std::numbers::pi * (double(j) + shift) / double(quad_points);
    xre[j] = std::cos(th);
    xim[j] = std::sin(th);
  }
  simd::active_kernels().horner_value(cre.data(), cim.data(), m, xre.data(), xim.data(), quad_points,
                                      ore.data(), oim.data());
  const double norm = std::log(std::abs(p[0])) + std::log(std::abs(p[n]));
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < quad_points; ++j) {
    const double y = std::log(ore[j] * ore[j] + oim[j] * oim[j]) - norm;
    // Neumaier summation.
    const double t = sum + y;
    comp += std::abs(sum) >= std::abs(y) ? (sum - t) + y : (y - t) + sum;
    sum = t;
  }
  return (sum + comp) / double(quad_points);
}

void require_jensen_domain(const Polynomial& p, std::size_t quad_points) {
  const std::size_t n = p.formal_degree();
  if (std::abs(p[0]) <= kDropTolerance || std::abs(p[n]) <= kDropTolerance)
    throw DomainError("Jensen identity requires b_0 b_n != 0");
  if (quad_points < 1) throw DomainError("Jensen identity: quad_points must be positive");
}

}  // namespace

JensenResult jensen_identity(const Polynomial& p, const ZeroSet& z, std::size_t quad_points) {
  require_jensen_domain(p, quad_points);
  JensenResult r;
  for (const auto& w : z.finite_zeros) {
    const double a = std::abs(w);
    r.lhs += std::abs(std::log(a));
    if (std::abs(a - 1.0) <= 1e-9) r.near_unimodular = true;
  }
  r.rhs = jensen_integral(p, quad_points);
  return r;
}

WeakJensenResult weak_jensen_check(const Polynomial& p, const ZeroSet& z, double T,
                                   std::size_t quad_points) {
  if (!(T > 1.0)) throw DomainError("weak_jensen_check: T must exceed 1");
  require_jensen_domain(p, quad_points);
  const double n = double(z.formal_degree);
  std::size_t inside_T = 0, inside_inv = 0;
  for (const auto& w : z.finite_zeros) {
    const double a = std::abs(w);
    if (a <= T) ++inside_T;
    if (a <= 1.0 / T) ++inside_inv;
  }
  WeakJensenResult r;
  r.lhs = std::log(T) * (1.0 - double(inside_T) / n + double(inside_inv) / n);
  r.rhs = jensen_integral(p, quad_points) / n;
  return r;
}

double VieteReport::min_slack() const {
  double s = kInf;
  for (const auto& [k, v] : upper_log_slack) s = std::min(s, v);
  for (const auto& [k, v] : lower_log_slack) s = std::min(s, v);
  return s;
}

VieteReport viete_checks(const Polynomial& p, const ZeroSet& z) {
  const std::size_t n = p.formal_degree();
  VieteReport r;
  const double lead = log_abs_or_neg_inf(p[n]);
  if (lead == -kInf || z.infinity_count > 0 || z.finite_zeros.size() != n) {
    r.product_relative_error = std::nan("");
    for (std::size_t k = 0; k <= n; ++k) r.skipped.push_back(k);
    return r;
  }
  std::vector<double> lm(n);
  for (std::size_t i = 0; i < n; ++i) lm[i] = std::log(std::abs(z.finite_zeros[i]));
  std::sort(lm.begin(), lm.end());
  // prefix[k] = sum_{j<=k} ln|w_j| (1-based), suffix[k] = sum_{j>k} ln|w_j|.
  std::vector<double> prefix(n + 1, 0.0), suffix(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) prefix[k] = prefix[k - 1] + lm[k - 1];
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + lm[k];

  const double b0 = log_abs_or_neg_inf(p[0]);
  r.product_relative_error =
      b0 == -kInf ? std::nan("") : std::abs(std::expm1(prefix[n] - (b0 - lead)));
  for (std::size_t k = 0; k <= n; ++k) {
    const double bk = log_abs_or_neg_inf(p[k]);
    if (bk == -kInf) {
      r.skipped.push_back(k);
      continue;
    }
    const double lb = log_binomial(n, k);
    r.upper_log_slack[k] = lb + suffix[k] - (bk - lead);
    r.lower_log_slack[k] = (b0 == -kInf) ? kInf : lb + b0 - bk - prefix[k];
  }
  return r;
}

}  // namespace zsect
