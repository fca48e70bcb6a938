#include "zsect/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "zsect/bounds.hpp"
#include "zsect/simd/kernels.hpp"

namespace zsect {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxSweeps = 600;

// Newton correction P(z)/P'(z) and relative backward error at a batch of points.
// Polynomials here are deflated: c_0 != 0 and c_d != 0.
class DenseEvaluator {
 public:
  explicit DenseEvaluator(std::span<const Complex> c) : degree_(c.size() - 1) {
    const std::size_t m = c.size();
    fwd_re_.resize(m);
    fwd_im_.resize(m);
    fwd_abs_.resize(m);
    rev_re_.resize(m);
    rev_im_.resize(m);
    rev_abs_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      fwd_re_[k] = c[k].real();
      fwd_im_[k] = c[k].imag();
      fwd_abs_[k] = std::abs(c[k]);
      rev_re_[m - 1 - k] = fwd_re_[k];
      rev_im_[m - 1 - k] = fwd_im_[k];
      rev_abs_[m - 1 - k] = fwd_abs_[k];
    }
  }

  std::size_t degree() const { return degree_; }

  void evaluate(std::span<const Complex> pts, std::span<Complex> corr, std::span<double> relerr) {
    const auto& kernels = simd::active_kernels();
    inner_.clear();
    outer_.clear();
    for (std::size_t i = 0; i < pts.size(); ++i) (std::abs(pts[i]) <= 1.0 ? inner_ : outer_).push_back(i);
    run(kernels, pts, inner_, false, corr, relerr);
    run(kernels, pts, outer_, true, corr, relerr);
  }

 private:
  void run(const simd::KernelTable& kernels, std::span<const Complex> pts,
           const std::vector<std::size_t>& idx, bool reversed, std::span<Complex> corr,
           std::span<double> relerr) {
    const std::size_t b = idx.size();
    if (b == 0) return;
    xr_.resize(b);
    xi_.resize(b);
    pr_.resize(b);
    pi_.resize(b);
    dr_.resize(b);
    di_.resize(b);
    s_.resize(b);
    for (std::size_t i = 0; i < b; ++i) {
      const Complex x = reversed ? 1.0 / pts[idx[i]] : pts[idx[i]];
      xr_[i] = x.real();
      xi_[i] = x.imag();
    }
    const auto& re = reversed ? rev_re_ : fwd_re_;
    const auto& im = reversed ? rev_im_ : fwd_im_;
    const auto& ab = reversed ? rev_abs_ : fwd_abs_;
    kernels.horner_newton(re.data(), im.data(), ab.data(), re.size(), xr_.data(), xi_.data(), b,
                          pr_.data(), pi_.data(), dr_.data(), di_.data(), s_.data());
    const double n = static_cast<double>(degree_);
    for (std::size_t i = 0; i < b; ++i) {
      const Complex p{pr_[i], pi_[i]};
      const Complex dp{dr_[i], di_[i]};
      const Complex z = pts[idx[i]];
      if (reversed) {
        // P(z) = z^n Q(1/z)  =>  P/P' = z Q / (n Q - w Q'),  w = 1/z.
        const Complex w{xr_[i], xi_[i]};
        corr[idx[i]] = z * p / (n * p - w * dp);
      } else {
        corr[idx[i]] = p / dp;
      }
      relerr[idx[i]] = s_[i] > 0.0 ? std::abs(p) / s_[i] : 0.0;
    }
  }

  std::size_t degree_;
  std::vector<double> fwd_re_, fwd_im_, fwd_abs_, rev_re_, rev_im_, rev_abs_;
  std::vector<std::size_t> inner_, outer_;
  std::vector<double> xr_, xi_, pr_, pi_, dr_, di_, s_;
};

// Same interface for sparse extended-range polynomials, evaluated term by term in
// log-space relative to the largest term.
class SparseEvaluator {
 public:
  explicit SparseEvaluator(std::vector<ScaledTerm> terms) : terms_(std::move(terms)) {
    degree_ = terms_.back().power;
  }

  std::size_t degree() const { return degree_; }

  void evaluate(std::span<const Complex> pts, std::span<Complex> corr, std::span<double> relerr) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Complex z = pts[i];
      const double r = std::abs(z);
      if (r == 0.0) {
        corr[i] = Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
        relerr[i] = 1.0;
        continue;
      }
      const double lr = std::log(r);
      const double arg = std::arg(z);
      double top = kNegInf;
      for (const auto& t : terms_) top = std::max(top, t.log_abs + static_cast<double>(t.power) * lr);
      Complex a{0.0, 0.0};
      Complex b{0.0, 0.0};
      double s = 0.0;
      for (const auto& t : terms_) {
        const double mag = std::exp(t.log_abs + static_cast<double>(t.power) * lr - top);
        const Complex term = t.unit * std::polar(mag, static_cast<double>(t.power) * arg);
        a += term;
        b += static_cast<double>(t.power) * term;
        s += mag;
      }
      corr[i] = z * a / b;
      relerr[i] = std::abs(a) / s;
    }
  }

 private:
  std::vector<ScaledTerm> terms_;
  std::size_t degree_ = 0;
};

struct AberthOutcome {
  std::vector<Complex> roots;
  double worst = 0.0;
};

template <class Evaluator>
AberthOutcome aberth(Evaluator& ev, std::vector<Complex> roots, double tol) {
  const std::size_t d = roots.size();
  const auto& kernels = simd::active_kernels();
  const double stop = std::min(tol * 1e-2, std::max(4.0 * static_cast<double>(d) * kEps, 16.0 * kEps));

  std::vector<double> re(d), im(d);
  for (std::size_t i = 0; i < d; ++i) {
    re[i] = roots[i].real();
    im[i] = roots[i].imag();
  }
  std::vector<char> done(d, 0);
  std::vector<std::size_t> active;
  std::vector<Complex> pts, corr;
  std::vector<double> relerr;

  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    active.clear();
    for (std::size_t i = 0; i < d; ++i)
      if (!done[i]) active.push_back(i);
    if (active.empty()) break;
    pts.resize(active.size());
    corr.resize(active.size());
    relerr.resize(active.size());
    for (std::size_t a = 0; a < active.size(); ++a) pts[a] = Complex{re[active[a]], im[active[a]]};
    ev.evaluate(pts, corr, relerr);

    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t i = active[a];
      const Complex z{re[i], im[i]};
      const bool small_residual = relerr[a] <= stop;
      Complex n = corr[a];
      if (!std::isfinite(n.real()) || !std::isfinite(n.imag())) {
        // Critical point or overflow: nudge off it.
        const double r = std::max(std::abs(z), 1e-3);
        re[i] += 1e-3 * r;
        im[i] += 7e-4 * r;
        continue;
      }
      double sr = 0.0, si = 0.0;
      kernels.aberth_sum(re[i], im[i], re.data(), im.data(), d, i, &sr, &si);
      const Complex delta = n / (1.0 - n * Complex{sr, si});
      if (std::isfinite(delta.real()) && std::isfinite(delta.imag())) {
        const Complex next = z - delta;
        re[i] = next.real();
        im[i] = next.imag();
        if (small_residual || std::abs(delta) <= 2.0 * kEps * std::abs(next)) done[i] = 1;
      }
    }
  }

  AberthOutcome out;
  out.roots.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.roots[i] = Complex{re[i], im[i]};
  corr.resize(d);
  relerr.resize(d);
  ev.evaluate(out.roots, corr, relerr);
  for (std::size_t i = 0; i < d; ++i) {
    const double e = std::isfinite(relerr[i]) ? relerr[i] : std::numeric_limits<double>::infinity();
    out.worst = std::max(out.worst, e);
  }
  return out;
}

std::vector<LogTerm> to_log_terms(const std::vector<double>& log_abs, std::size_t from, std::size_t to) {
  std::vector<LogTerm> out;
  for (std::size_t k = from; k < to; ++k)
    if (log_abs[k] > kNegInf) out.push_back({static_cast<double>(k), log_abs[k]});
  return out;
}

// [ln c_P, ln C_P] of a deflated polynomial given ln|c_k|.
std::pair<double, double> log_radius_bounds(const std::vector<double>& log_abs) {
  const std::size_t d = log_abs.size() - 1;
  const std::vector<LogTerm> lead{{static_cast<double>(d), log_abs[d]}};
  const std::vector<LogTerm> constant{{0.0, log_abs[0]}};
  const auto below = to_log_terms(log_abs, 0, d);
  const auto above = to_log_terms(log_abs, 1, d + 1);
  return {log_positive_root(above, constant), log_positive_root(lead, below)};
}

std::vector<Complex> start_points(const std::vector<double>& log_abs, double phase) {
  const auto [lo, hi] = log_radius_bounds(log_abs);
  return newton_polygon_start(log_abs, std::exp(lo), std::exp(hi), phase);
}

std::vector<ScaledTerm> scaled_terms(const std::vector<ScaledTerm>& terms, double log_scale) {
  std::vector<ScaledTerm> out = terms;
  for (auto& t : out) t.log_abs += static_cast<double>(t.power) * log_scale;
  return out;
}

std::vector<double> log_abs_of(const std::vector<ScaledTerm>& terms, std::size_t d) {
  std::vector<double> out(d + 1, kNegInf);
  for (const auto& t : terms) out[t.power] = t.log_abs;
  return out;
}

// Roots of a deflated sparse polynomial (lowest power 0, degree >= 2), with the
// rescaled restart.
std::vector<Complex> solve_sparse(const std::vector<ScaledTerm>& terms, double tol, double first_worst) {
  const std::size_t d = terms.back().power;
  const auto log_abs = log_abs_of(terms, d);
  const double log_scale = log_radius_bounds(log_abs).second;
  const auto scaled = scaled_terms(terms, -log_scale);
  SparseEvaluator ev(scaled);
  AberthOutcome out = aberth(ev, start_points(log_abs_of(scaled, d), 0.9), tol);
  if (!(out.worst <= tol)) {
    throw NonConvergenceError("root finder failed to converge after rescaled restart",
                              std::min(first_worst, out.worst));
  }
  const double scale = std::exp(log_scale);
  for (auto& r : out.roots) r *= scale;
  return out.roots;
}

}  // namespace

std::vector<Complex> newton_polygon_start(const std::vector<double>& log_abs, double lower,
                                          double upper, double phase) {
  const std::size_t d = log_abs.size() - 1;
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k <= d; ++k) {
    if (!(log_abs[k] > kNegInf)) continue;
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      // Drop b unless it lies strictly above the chord from a to k.
      const double cross = (static_cast<double>(b) - a) * (log_abs[k] - log_abs[a]) -
                           (log_abs[b] - log_abs[a]) * (static_cast<double>(k) - a);
      if (cross >= 0.0) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }
  const double llo = std::log(lower);
  const double lhi = std::log(upper);
  std::vector<Complex> out;
  out.reserve(d);
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const std::size_t i = hull[e];
    const std::size_t j = hull[e + 1];
    const std::size_t count = j - i;
    double lr = (log_abs[i] - log_abs[j]) / static_cast<double>(count);
    if (llo <= lhi) lr = std::clamp(lr, llo, lhi);
    const double radius = std::exp(lr);
    const double offset = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(d) + phase;
    for (std::size_t l = 0; l < count; ++l) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(count) + offset;
      out.push_back(std::polar(radius, theta));
    }
  }
  return out;
}

ZeroSet find_zeros(const Polynomial& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_zeros: tol must be positive");
  const long deg = p.degree();
  if (deg < 0) throw DomainError("find_zeros: all-zero polynomial");
  const std::size_t origin = p.origin_multiplicity();
  const std::size_t top = static_cast<std::size_t>(deg);

  ZeroSet z;
  z.formal_degree = p.formal_degree();
  z.infinity_count = p.formal_degree() - top;
  z.finite_zeros.assign(origin, Complex{0.0, 0.0});

  const std::span<const Complex> core(p.coeffs().data() + origin, top - origin + 1);
  const std::size_t d = core.size() - 1;
  if (d == 0) return z;
  if (d == 1) {
    z.finite_zeros.push_back(-core[0] / core[1]);
    return z;
  }

  std::vector<double> log_abs(d + 1, kNegInf);
  for (std::size_t k = 0; k <= d; ++k) {
    const double a = std::abs(core[k]);
    if (a > kDropTolerance) log_abs[k] = std::log(a);
  }
  // Entries at or below the drop tolerance are exact zeros for the iteration too.
  std::vector<Complex> cleaned(core.begin(), core.end());
  for (std::size_t k = 0; k <= d; ++k)
    if (!(log_abs[k] > kNegInf)) cleaned[k] = Complex{0.0, 0.0};

  DenseEvaluator ev(cleaned);
  AberthOutcome out = aberth(ev, start_points(log_abs, 0.4), tol);
  if (!(out.worst <= tol)) {
    std::vector<ScaledTerm> terms;
    for (std::size_t k = 0; k <= d; ++k)
      if (log_abs[k] > kNegInf) terms.push_back({k, cleaned[k] / std::abs(cleaned[k]), log_abs[k]});
    out.roots = solve_sparse(terms, tol, out.worst);
  }
  z.finite_zeros.insert(z.finite_zeros.end(), out.roots.begin(), out.roots.end());
  return z;
}

ZeroSet find_zeros(const SparsePolynomial& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_zeros: tol must be positive");
  if (p.terms().empty()) throw DomainError("find_zeros: all-zero polynomial");
  const std::size_t origin = p.terms().front().power;
  const std::size_t top = p.terms().back().power;

  ZeroSet z;
  z.formal_degree = p.formal_degree();
  z.infinity_count = p.formal_degree() - top;
  z.finite_zeros.assign(origin, Complex{0.0, 0.0});

  std::vector<ScaledTerm> terms = p.terms();
  for (auto& t : terms) t.power -= origin;
  const std::size_t d = top - origin;
  if (d == 0) return z;
  if (d == 1) {
    const auto& c0 = terms.front();
    const auto& c1 = terms.back();
    z.finite_zeros.push_back(-(c0.unit / c1.unit) * std::exp(c0.log_abs - c1.log_abs));
    return z;
  }

  SparseEvaluator ev(terms);
  AberthOutcome out = aberth(ev, start_points(log_abs_of(terms, d), 0.4), tol);
  if (!(out.worst <= tol)) out.roots = solve_sparse(terms, tol, out.worst);
  z.finite_zeros.insert(z.finite_zeros.end(), out.roots.begin(), out.roots.end());
  return z;
}

std::vector<double> sorted_moduli(const ZeroSet& z) {
  std::vector<double> out;
  out.reserve(z.finite_zeros.size() + z.infinity_count);
  for (const auto& w : z.finite_zeros) out.push_back(std::abs(w));
  std::sort(out.begin(), out.end());
  out.insert(out.end(), z.infinity_count, std::numeric_limits<double>::infinity());
  return out;
}

double backward_error(const Polynomial& p, Complex w) {
  const long deg = p.degree();
  if (deg < 0) return 0.0;
  const std::size_t origin = p.origin_multiplicity();
  if (w == Complex{0.0, 0.0}) return origin > 0 ? 0.0 : 1.0;
  const std::size_t top = static_cast<std::size_t>(deg);
  const double r = std::abs(w);
  Complex acc{0.0, 0.0};
  double s = 0.0;
  if (r <= 1.0) {
    for (std::size_t k = top + 1; k-- > origin;) {
      acc = acc * w + p[k];
      s = s * r + std::abs(p[k]);
    }
  } else {
    const Complex x = 1.0 / w;
    const double rx = 1.0 / r;
    for (std::size_t k = origin; k <= top; ++k) {
      acc = acc * x + p[k];
      s = s * rx + std::abs(p[k]);
    }
  }
  return s > 0.0 ? std::abs(acc) / s : 0.0;
}

double backward_error(const SparsePolynomial& p, Complex w) {
  if (p.terms().empty()) return 0.0;
  if (w == Complex{0.0, 0.0}) return p.terms().front().power > 0 ? 0.0 : 1.0;
  return std::exp(p.log_abs_at(w) - p.log_abs_sum_at(std::abs(w)));
}

}  // namespace zsect
