#include "zsect/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zsect/gauge.hpp"
#include "zsect/json_util.hpp"
#include "zsect/measures.hpp"
#include "zsect/parallel.hpp"
#include "zsect/roots.hpp"

namespace zsect {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1), never exactly 0 or 1.
double unit_open(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

struct Polar {
  Complex unit{1.0, 0.0};
  double log_abs = kNegInf;
};

Polar polar_of(Complex z) {
  const double a = std::abs(z);
  if (a == 0.0) return {Complex{1.0, 0.0}, kNegInf};
  return {z / a, std::log(a)};
}

Polar draw_polar(const Ensemble& e, std::uint64_t stream, std::size_t k) {
  const std::uint64_t base = splitmix(stream ^ splitmix(static_cast<std::uint64_t>(k)));
  const double u1 = unit_open(base);
  const double u2 = unit_open(splitmix(base));
  const double angle = 2.0 * std::numbers::pi * u2;
  switch (e.dist) {
    case Distribution::gaussian_complex: {
      const double r = std::sqrt(-std::log(u1));  // |X|^2 ~ Exp(1), E|X|^2 = 1
      return polar_of(std::polar(r, angle));
    }
    case Distribution::gaussian_real: {
      const double r = std::sqrt(-2.0 * std::log(u1));
      return polar_of(Complex{r * std::cos(angle), 0.0});
    }
    case Distribution::uniform_disk: return polar_of(std::polar(std::sqrt(u1), angle));
    case Distribution::bernoulli: {
      const double p = e.schedule == Schedule::inverse_n ? (k == 0 ? 1.0 : 1.0 / static_cast<double>(k)) : e.param;
      return u1 < p ? Polar{Complex{1.0, 0.0}, 0.0} : Polar{};
    }
    case Distribution::log_heavy_tail:
      // ln|X| ~ Pareto(alpha) with scale 1, uniform phase.
      return {std::polar(1.0, angle), std::pow(u1, -1.0 / e.param)};
  }
  return {};
}

struct Stat {
  double sum = 0.0, comp = 0.0;
  void add(double y) {
    const double t = sum + y;
    comp += std::abs(sum) >= std::abs(y) ? (sum - t) + y : (y - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct MeanErr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Mean and standard error in index order with compensated sums.
MeanErr mean_err(const std::vector<double>& v) {
  MeanErr r;
  if (v.empty()) return r;
  Stat s;
  for (double x : v) s.add(x);
  r.mean = s.value() / double(v.size());
  if (v.size() < 2) return r;
  Stat q;
  for (double x : v) q.add((x - r.mean) * (x - r.mean));
  r.stderr_ = std::sqrt(q.value() / double(v.size() - 1) / double(v.size()));
  return r;
}

// Zeros of trial `trial`'s section of degree n; dense path unless magnitudes leave double range.
ZeroSet trial_zeros(const Ensemble& e, std::size_t n, std::uint64_t seed, std::size_t trial, bool reversed) {
  const std::uint64_t stream = trial_stream(seed, trial);
  std::vector<Polar> c(n + 1);
  bool extreme = false;
  for (std::size_t k = 0; k <= n; ++k) {
    c[k] = draw_polar(e, stream, k);
    if (c[k].log_abs > 600.0) extreme = true;
  }
  if (reversed) std::reverse(c.begin(), c.end());
  if (extreme) {
    std::vector<ScaledTerm> terms;
    for (std::size_t k = 0; k <= n; ++k)
      if (c[k].log_abs > kNegInf) terms.push_back({k, c[k].unit, c[k].log_abs});
    return find_zeros(SparsePolynomial(std::move(terms), n));
  }
  std::vector<Complex> dense(n + 1);
  for (std::size_t k = 0; k <= n; ++k) dense[k] = c[k].log_abs == kNegInf ? Complex{0.0, 0.0} : c[k].unit * std::exp(c[k].log_abs);
  return find_zeros(Polynomial(std::move(dense), n));
}

std::vector<double> path_log_abs(const Ensemble& e, std::size_t horizon, std::uint64_t seed) {
  const std::uint64_t stream = trial_stream(seed, 0);
  std::vector<double> la(horizon + 1);
  for (std::size_t k = 0; k <= horizon; ++k) la[k] = draw_log_abs(e, stream, k);
  return la;
}

}  // namespace

Ensemble Ensemble::bernoulli(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("bernoulli: p must lie in (0, 1]");
  return {Distribution::bernoulli, p, Schedule::iid};
}

Ensemble Ensemble::log_heavy_tail(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("log_heavy_tail: alpha must be positive");
  return {Distribution::log_heavy_tail, alpha, Schedule::iid};
}

bool Ensemble::has_log_moment() const {
  // Gaussian, uniform and Bernoulli laws have all log moments; for the heavy tail
  // E (ln+|X|)^{1+eps} is finite for some eps > 0 exactly when alpha > 1.
  return dist != Distribution::log_heavy_tail || param > 1.0;
}

bool Ensemble::uniformly_non_null() const {
  // Declared delta: 1/2 for the continuous laws and the heavy tail (|X| >= e), 1 for
  // Bernoulli. With p_n = 1/n, P(|X_n| >= delta) -> 0.
  return !(dist == Distribution::bernoulli && schedule == Schedule::inverse_n);
}

Ensemble Ensemble::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const bool has_arg = colon != std::string::npos;
  double arg = 0.0;
  if (has_arg) {
    try {
      std::size_t pos = 0;
      const std::string s = text.substr(colon + 1);
      arg = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw DomainError("invalid ensemble parameter in '" + text + "'");
    }
  }
  if (head == "gaussian_complex" && !has_arg) return gaussian_complex();
  if (head == "gaussian_real" && !has_arg) return gaussian_real();
  if (head == "uniform_disk" && !has_arg) return uniform_disk();
  if (head == "bernoulli_pn" && !has_arg) return bernoulli_pn();
  if (head == "bernoulli" && has_arg) return bernoulli(arg);
  if (head == "log_heavy_tail" && has_arg) return log_heavy_tail(arg);
  throw DomainError("unknown ensemble '" + text + "'");
}

std::string Ensemble::name() const {
  auto num = [](double x) {
    nlohmann::json j = x;
    return j.dump();
  };
  switch (dist) {
    case Distribution::gaussian_complex: return "gaussian_complex";
    case Distribution::gaussian_real: return "gaussian_real";
    case Distribution::uniform_disk: return "uniform_disk";
    case Distribution::bernoulli: return schedule == Schedule::inverse_n ? "bernoulli_pn" : "bernoulli:" + num(param);
    case Distribution::log_heavy_tail: return "log_heavy_tail:" + num(param);
  }
  return "";
}

nlohmann::json Ensemble::to_json() const {
  return {{"name", name()}, {"has_log_moment", has_log_moment()}, {"uniformly_non_null", uniformly_non_null()}};
}

Ensemble Ensemble::from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse(j.get<std::string>());
  if (j.is_object() && j.contains("name")) return parse(j.at("name").get<std::string>());
  throw DomainError("malformed ensemble descriptor");
}

std::uint64_t trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return splitmix(splitmix(seed ^ 0x5eed5eed5eed5eedULL) + splitmix(trial ^ 0x7a17a17a17a17a1ULL));
}

Complex draw(const Ensemble& e, std::uint64_t stream, std::size_t k) {
  const Polar p = draw_polar(e, stream, k);
  return p.log_abs == kNegInf ? Complex{0.0, 0.0} : p.unit * std::exp(p.log_abs);
}

double draw_log_abs(const Ensemble& e, std::uint64_t stream, std::size_t k) {
  return draw_polar(e, stream, k).log_abs;
}

std::vector<Complex> sample_coeffs(const Ensemble& e, std::size_t n, std::uint64_t seed) {
  const std::uint64_t stream = trial_stream(seed, 0);
  std::vector<Complex> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = draw(e, stream, k);
  return out;
}

nlohmann::json MCReport::to_json() const {
  nlohmann::json j;
  j["ensemble"] = ensemble.to_json();
  j["n"] = n;
  j["t_grid"] = t_grid;
  j["phi_hat"] = phi_hat;
  j["stderr"] = stderr_;
  j["trials"] = trials;
  j["completed"] = completed;
  j["failures"] = failures;
  j["seed"] = seed;
  j["mean_abs_weyl1"] = mean_abs_weyl1;
  j["stderr_abs_weyl1"] = stderr_abs_weyl1;
  return j;
}

MCReport mc_phi(const Ensemble& e, std::size_t n, const std::vector<double>& t_grid, std::size_t trials,
                std::uint64_t seed, std::size_t workers) {
  if (trials < 10) throw DomainError("mc_phi: at least 10 trials required");
  if (n < 1) throw DomainError("mc_phi: n must be at least 1");
  for (double t : t_grid)
    if (!(t >= 0.0)) throw DomainError("mc_phi: grid points must be nonnegative");

  MCReport r;
  r.ensemble = e;
  r.n = n;
  r.t_grid = t_grid;
  r.trials = trials;
  r.seed = seed;
  r.records.resize(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    TrialRecord& rec = r.records[i];
    rec.trial = i;
    try {
      const ZeroSet z = trial_zeros(e, n, seed, i, false);
      rec.cdf.reserve(t_grid.size());
      for (double t : t_grid) rec.cdf.push_back(counting_fn(z, t));
      rec.weyl1 = weyl_sum(z, 1);
      rec.ok = true;
    } catch (const NonConvergenceError&) {
    } catch (const DomainError&) {
    }
  });

  std::vector<std::vector<double>> cols(t_grid.size());
  std::vector<double> weyl;
  for (const auto& rec : r.records) {
    if (!rec.ok) {
      ++r.failures;
      continue;
    }
    ++r.completed;
    for (std::size_t g = 0; g < t_grid.size(); ++g) cols[g].push_back(rec.cdf[g]);
    weyl.push_back(std::abs(rec.weyl1));
  }
  for (const auto& c : cols) {
    const MeanErr m = mean_err(c);
    r.phi_hat.push_back(m.mean);
    r.stderr_.push_back(m.stderr_);
  }
  const MeanErr w = mean_err(weyl);
  r.mean_abs_weyl1 = w.mean;
  r.stderr_abs_weyl1 = w.stderr_;
  return r;
}

nlohmann::json SymmetryReport::to_json() const {
  return {{"t", t},
          {"lhs", lhs},
          {"rhs", rhs},
          {"diff", diff},
          {"stderr", stderr_},
          {"boundary_allowance", boundary_allowance},
          {"reciprocity_defect", reciprocity_defect},
          {"completed", completed}};
}

SymmetryReport phi_symmetry_check(const Ensemble& e, std::size_t n, double t, std::size_t trials,
                                  std::uint64_t seed, std::size_t workers) {
  if (!e.is_iid()) throw DomainError("phi_symmetry_check: ensemble must be iid");
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("phi_symmetry_check: t must lie in (0, 1]");
  if (trials < 10) throw DomainError("phi_symmetry_check: at least 10 trials required");
  if (n < 1) throw DomainError("phi_symmetry_check: n must be at least 1");

  struct Row {
    bool ok = false;
    double f_t = 0.0, f_inv = 0.0, boundary = 0.0, defect = 0.0;
  };
  std::vector<Row> rows(trials);
  const double inv = 1.0 / t;
  const double nd = static_cast<double>(n);
  parallel_for(trials, workers, [&](std::size_t i) {
    Row& row = rows[i];
    try {
      const ZeroSet z = trial_zeros(e, n, seed, i, false);
      const ZeroSet zr = trial_zeros(e, n, seed, i, true);
      row.f_t = counting_fn(z, t);
      row.f_inv = counting_fn(z, inv);
      std::size_t near = 0;
      for (const auto& w : z.finite_zeros) {
        const double a = std::abs(w);
        if (std::abs(a - t) <= 1e-9 * t || std::abs(a - inv) <= 1e-9 * inv) ++near;
      }
      row.boundary = double(near) / nd;
      // Zeros of the reversal are 1/w: F(t) = 1 - #{|v| < 1/t}/n.
      std::size_t strict = 0;
      for (const auto& v : zr.finite_zeros)
        if (std::abs(v) < inv) ++strict;
      row.defect = std::abs(row.f_t - (1.0 - double(strict) / nd));
      row.ok = true;
    } catch (const NonConvergenceError&) {
    } catch (const DomainError&) {
    }
  });

  SymmetryReport r;
  r.t = t;
  std::vector<double> f_t, f_inv, d, b;
  for (const auto& row : rows) {
    if (!row.ok) continue;
    ++r.completed;
    f_t.push_back(row.f_t);
    f_inv.push_back(row.f_inv);
    d.push_back(row.f_t + row.f_inv - 1.0);
    b.push_back(row.boundary);
    r.reciprocity_defect = std::max(r.reciprocity_defect, row.defect);
  }
  r.lhs = mean_err(f_t).mean;
  r.rhs = 1.0 - mean_err(f_inv).mean;
  const MeanErr md = mean_err(d);
  r.diff = md.mean;
  r.stderr_ = md.stderr_;
  r.boundary_allowance = mean_err(b).mean;
  return r;
}

double radius_dichotomy(const Ensemble& e, std::size_t horizon, std::uint64_t seed) {
  if (horizon < 2) throw DomainError("radius_dichotomy: horizon too small");
  const auto la = path_log_abs(e, horizon, seed);
  double best = 0.0;
  for (std::size_t n = horizon / 2; n <= horizon; ++n)
    if (la[n] > kNegInf) best = std::max(best, std::exp(la[n] / static_cast<double>(n)));
  return best;
}

double window_gauge_path(const Ensemble& e, double gamma, std::size_t horizon, std::uint64_t seed) {
  return l_estimate(path_log_abs(e, horizon, seed), gamma, horizon);
}

std::vector<bool> window_events(const Ensemble& e, double gamma, const std::vector<std::size_t>& probes,
                                std::uint64_t seed) {
  std::size_t top = 0;
  for (auto p : probes) top = std::max(top, p);
  const auto la = path_log_abs(e, top, seed);
  std::vector<bool> out;
  for (auto n : probes) out.push_back(n >= 1 && log_window_max(la, n, gamma) == kNegInf);
  return out;
}

std::vector<std::size_t> dyadic_probes(std::size_t limit) {
  std::vector<std::size_t> out;
  for (std::size_t n = 2; n <= limit; n *= 2) out.push_back(n);
  return out;
}

ConditionFlags check_conditions(const Ensemble& e) {
  ConditionFlags f;
  f.log_moment = e.has_log_moment();
  f.uniformly_non_null = e.uniformly_non_null();
  f.szego_almost_surely = f.log_moment && f.uniformly_non_null;
  if (f.szego_almost_surely) f.conclusion = "almost surely a Szego power series";
  else if (!f.log_moment) f.conclusion = "radius of convergence almost surely 0; outside the class";
  else if (e.dist == Distribution::bernoulli && e.schedule == Schedule::inverse_n)
    f.conclusion = "no conclusion from the moment conditions; index 1 almost surely";
  else f.conclusion = "no conclusion from the moment conditions";
  return f;
}

}  // namespace zsect
