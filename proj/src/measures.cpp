#include "zsect/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zsect/json_util.hpp"

namespace zsect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Steps {
  std::vector<double> x;    // compactified positions, increasing
  std::vector<double> cum;  // mass of [0, x_i]
};

Steps steps_of(const RadialMeasure& m) {
  Steps s;
  double acc = 0.0;
  for (const auto& a : m.atoms()) {
    acc += a.weight;
    s.x.push_back(compactify(a.radius));
    s.cum.push_back(acc);
  }
  if (!s.cum.empty()) s.cum.back() = 1.0;
  return s;
}

// sup_x G(x) - F(x + eps) <= eps, checked at the jumps of G.
bool dominated(const Steps& g, const Steps& f, double eps) {
  std::size_t j = 0;
  double fval = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double y = g.x[i] + eps;
    while (j < f.x.size() && f.x[j] <= y) fval = f.cum[j++];
    if (g.cum[i] - fval > eps) return false;
  }
  return true;
}

}  // namespace

RadialMeasure RadialMeasure::from_atoms(std::vector<RadialAtom> atoms) {
  for (const auto& a : atoms) {
    if (!(a.radius >= 0.0)) throw DomainError("radial measure: negative or NaN radius");
    if (!(a.weight >= 0.0)) throw DomainError("radial measure: negative or NaN weight");
  }
  std::sort(atoms.begin(), atoms.end(), [](const RadialAtom& a, const RadialAtom& b) { return a.radius < b.radius; });
  RadialMeasure m;
  for (const auto& a : atoms) {
    if (a.weight == 0.0) continue;
    if (!m.atoms_.empty() && m.atoms_.back().radius == a.radius) m.atoms_.back().weight += a.weight;
    else m.atoms_.push_back(a);
    m.total_ += a.weight;
  }
  return m;
}

RadialMeasure RadialMeasure::dirac(double radius) { return from_atoms({{radius, 1.0}}); }

RadialMeasure RadialMeasure::uniform(const std::vector<double>& radii) {
  if (radii.empty()) throw DomainError("uniform radial measure needs at least one radius");
  std::vector<RadialAtom> atoms;
  for (double r : radii) atoms.push_back({r, 1.0 / static_cast<double>(radii.size())});
  return from_atoms(std::move(atoms));
}

bool RadialMeasure::is_probability(double tol) const { return std::abs(total_ - 1.0) <= tol; }

double RadialMeasure::cdf(double t) const {
  double acc = 0.0;
  for (const auto& a : atoms_) {
    if (a.radius > t) break;
    acc += a.weight;
  }
  return acc;
}

double RadialMeasure::mass_at_infinity() const {
  return !atoms_.empty() && std::isinf(atoms_.back().radius) ? atoms_.back().weight : 0.0;
}

nlohmann::json RadialMeasure::to_json() const {
  auto atoms = nlohmann::json::array();
  for (const auto& a : atoms_) atoms.push_back({json_number(a.radius), a.weight});
  return {{"atoms", atoms}, {"total_weight", total_}};
}

double compactify(double t) { return std::isinf(t) ? 1.0 : t / (1.0 + t); }

RadialMeasure radial_projection(const ZeroSet& z) {
  if (z.formal_degree == 0) throw DomainError("radial_projection: formal degree 0");
  const double w = 1.0 / static_cast<double>(z.formal_degree);
  std::vector<RadialAtom> atoms;
  atoms.reserve(z.finite_zeros.size() + 1);
  for (const auto& x : z.finite_zeros) atoms.push_back({std::abs(x), w});
  if (z.infinity_count > 0) atoms.push_back({kInf, w * static_cast<double>(z.infinity_count)});
  return RadialMeasure::from_atoms(std::move(atoms));
}

double counting_fn(const ZeroSet& z, double t) {
  if (z.formal_degree == 0) throw DomainError("counting_fn: formal degree 0");
  std::size_t c = 0;
  for (const auto& x : z.finite_zeros)
    if (std::abs(x) <= t) ++c;
  return static_cast<double>(c) / static_cast<double>(z.formal_degree);
}

double levy_distance(const RadialMeasure& mu, const RadialMeasure& nu) {
  if (!mu.is_probability() || !nu.is_probability())
    throw DomainError("levy_distance: inputs must be probability measures");
  const Steps f = steps_of(mu);
  const Steps g = steps_of(nu);
  auto feasible = [&](double eps) { return dominated(g, f, eps) && dominated(f, g, eps); };
  if (feasible(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

Complex weyl_sum(const ZeroSet& z, std::size_t m) {
  if (m < 1) throw DomainError("weyl_sum: m must be at least 1");
  if (z.formal_degree == 0) throw DomainError("weyl_sum: formal degree 0");
  Complex acc{0.0, 0.0};
  for (const auto& w : z.finite_zeros) {
    const double r = std::abs(w);
    if (r == 0.0) continue;
    acc += std::polar(1.0, -static_cast<double>(m) * std::arg(w));
  }
  return acc / static_cast<double>(z.formal_degree);
}

Complex power_sum_newton(std::span<const Complex> a, std::size_t m) {
  if (m < 1) throw DomainError("power_sum_newton: m must be at least 1");
  if (a.empty() || std::abs(a[0]) <= kDropTolerance) throw DomainError("power_sum_newton: a_0 = 0");
  std::vector<Complex> c(m + 1, Complex{0.0, 0.0});
  for (std::size_t k = 0; k <= m && k < a.size(); ++k) c[k] = a[k] / a[0];
  // p_k + c_1 p_{k-1} + ... + c_{k-1} p_1 + k c_k = 0
  std::vector<Complex> p(m + 1, Complex{0.0, 0.0});
  for (std::size_t k = 1; k <= m; ++k) {
    Complex acc = static_cast<double>(k) * c[k];
    for (std::size_t j = 1; j < k; ++j) acc += c[j] * p[k - j];
    p[k] = -acc;
  }
  return p[m];
}

WeylChain weyl_chain(const Polynomial& p, const ZeroSet& z, std::size_t m, double T) {
  if (!(T > 1.0)) throw DomainError("weyl_chain: T must exceed 1");
  WeylChain c;
  const double n = static_cast<double>(z.formal_degree);
  c.weyl = weyl_sum(z, m);
  c.power_part = power_sum_newton(p.coeffs(), m) / n;
  double r = kInf;
  for (const auto& w : z.finite_zeros) r = std::min(r, std::abs(w));
  const double md = static_cast<double>(m);
  const double f_inner = counting_fn(z, 1.0 / T);
  c.inner_term = f_inner > 0.0 ? f_inner * (std::pow(r, -md) - 1.0) : 0.0;
  c.annulus_term = (std::pow(T, md) - 1.0) + (1.0 - std::pow(T, -md));
  c.outer_term = 1.0 - counting_fn(z, T);
  return c;
}

}  // namespace zsect
