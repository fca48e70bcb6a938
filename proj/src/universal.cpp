#include "zsect/universal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "zsect/bounds.hpp"
#include "zsect/json_util.hpp"
#include "zsect/parallel.hpp"
#include "zsect/roots.hpp"

namespace zsect {

namespace {

using i128 = __int128;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kThreeMinusE = 3.0 - std::numbers::e;
constexpr std::size_t kBoundarySamples = 64;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// ln|1 - w| given w = exp(lw + i theta), stable when |w| is huge.
double log_abs_one_minus(double lw, double theta) {
  if (lw > 40.0) return lw + std::log(std::abs(1.0 - std::polar(std::exp(-lw), -theta)));
  return std::log(std::abs(1.0 - std::polar(std::exp(lw), theta)));
}

// (r_j - r_{j-1}) / (r_j + r_{j-1}) as an exact fraction.
struct Frac {
  i128 num, den;
};

std::vector<Frac> separations(const TargetMeasure& phi) {
  std::vector<Frac> out;
  for (std::size_t j = 1; j < phi.m(); ++j) {
    const Rational& a = phi.radii[j];
    const Rational& b = phi.radii[j - 1];
    const i128 x = i128(a.num) * b.den;
    const i128 y = i128(b.num) * a.den;
    out.push_back({x - y, x + y});
  }
  return out;
}

unsigned __int128 central_binomial(std::size_t m) {
  const std::size_t c = (m + 1) / 2;
  unsigned __int128 v = 1;
  for (std::size_t i = 1; i <= c; ++i) v = v * (m - c + i) / i;
  return v;
}

bool star2(const TargetMeasure& phi, std::size_t k, std::size_t N) {
  const std::size_t m = phi.m();
  if (k == 1) {
    // binom(m, ceil(m/2)) <= 2^N, exactly.
    if (N >= 127) return true;
    return central_binomial(m) <= (static_cast<unsigned __int128>(1) << N);
  }
  return log_binomial(m, (m + 1) / 2) <= static_cast<double>(N) * std::log1p(1.0 / static_cast<double>(k));
}

bool star3(const TargetMeasure& phi, std::size_t N, double log_A) {
  const double r1 = phi.radii.front().value();
  return static_cast<double>(N) * std::log((r1 + 1.0) / 2.0) + static_cast<double>(phi.m()) * std::log(kThreeMinusE) >
         log_A;
}

bool choose_M_ok(const TargetMeasure& phi, std::size_t k, std::size_t N, std::size_t d_prev, std::size_t M) {
  const i128 Mi = static_cast<i128>(M);
  for (const Frac& f : separations(phi))
    if (Mi * f.num < f.den) return false;  // 1/M <= tau_j
  const Rational& r1 = phi.radii.front();
  if (!(Mi * (i128(r1.num) - r1.den) > 2 * i128(r1.num))) return false;  // r1 (1 - 1/M) > (1 + r1)/2
  const Rational& rm = phi.radii.back();
  if (!(i128(k) * rm.num <= Mi * rm.den)) return false;  // r_m / M <= 1/k
  if (!(i128(k) * (i128(N) + i128(d_prev)) < i128(phi.m()) * Mi)) return false;  // N + d_prev < mM/k
  return true;
}

void require_target(const TargetMeasure& phi) {
  if (phi.radii.empty()) throw DomainError("target measure has no atoms");
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("rational: non-finite value");
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // convergents h/k
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h = ai * h0 + h1;
    const std::int64_t k = ai * k0 + k1;
    if (k > 1000000) break;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) return make(h, k);
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  throw DomainError("value is not a small-denominator rational: " + std::to_string(x));
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t p1 = 0, p2 = 0;
      const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
      const long long n = std::stoll(a, &p1);
      const long long d = std::stoll(b, &p2);
      if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument(text);
      return make(n, d);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos && text.find_first_of("eE") == std::string::npos && text.size() - dot - 1 <= 15) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::size_t pos = 0;
      const long long n = std::stoll(digits, &pos);
      if (pos != digits.size()) throw std::invalid_argument(text);
      std::int64_t den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      return make(n, den);
    }
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return from_double(v);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("invalid rational '" + text + "'");
  }
}

std::string Rational::str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

TargetMeasure TargetMeasure::make(std::vector<Rational> radii) {
  if (radii.empty()) throw DomainError("target measure has no atoms");
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const Rational& r = radii[j];
    if (!(r.num > r.den)) throw DomainError("target radii must exceed 1");
    if (j > 0) {
      const Rational& p = radii[j - 1];
      if (!(i128(r.num) * p.den > i128(p.num) * r.den)) throw DomainError("target radii must be strictly increasing");
    }
  }
  return TargetMeasure{std::move(radii)};
}

RadialMeasure TargetMeasure::measure() const {
  std::vector<double> r;
  for (const auto& q : radii) r.push_back(q.value());
  return RadialMeasure::uniform(r);
}

nlohmann::json TargetMeasure::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& q : radii) arr.push_back(q.str());
  return {{"radii", arr}};
}

std::vector<TargetMeasure> parse_targets(const nlohmann::json& j) {
  auto one = [](const nlohmann::json& t) {
    const nlohmann::json& list = t.is_object() ? t.at("radii") : t;
    if (!list.is_array()) throw DomainError("target radii must be a list");
    std::vector<Rational> radii;
    for (const auto& r : list) radii.push_back(r.is_string() ? Rational::parse(r.get<std::string>()) : Rational::from_double(r.get<double>()));
    return TargetMeasure::make(std::move(radii));
  };
  try {
    std::vector<TargetMeasure> out;
    if (j.is_object() && j.contains("targets")) {
      for (const auto& t : j.at("targets")) out.push_back(one(t));
    } else if (j.is_object()) {
      out.push_back(one(j));
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
      for (const auto& t : j) out.push_back(one(t));
    } else {
      out.push_back(one(j));
    }
    if (out.empty()) throw DomainError("no targets given");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed targets: ") + e.what());
  }
}

std::vector<TargetMeasure> diagonal_targets(std::size_t count) {
  auto level_rationals = [](std::size_t L) {
    std::vector<Rational> out;
    for (std::size_t q = 1; q <= L; ++q)
      for (std::size_t p = q + 1; p <= (L + 1) * q; ++p)
        if (std::gcd(p, q) == 1) out.push_back(Rational::make(std::int64_t(p), std::int64_t(q)));
    std::sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) { return i128(a.num) * b.den < i128(b.num) * a.den; });
    return out;
  };
  auto in_level = [](const std::vector<Rational>& radii, std::size_t L) {
    if (radii.size() > L) return false;
    for (const auto& r : radii)
      if (std::size_t(r.den) > L || r.num > std::int64_t(L + 1) * r.den) return false;
    return true;
  };

  std::vector<TargetMeasure> out;
  // Visits level L targets (not in level L-1) in order of size, then lexicographically.
  auto visit_level = [&](std::size_t L, const std::function<bool(const std::vector<Rational>&)>& emit) {
    const auto R = level_rationals(L);
    std::vector<Rational> cur;
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t size) -> bool {
      if (cur.size() == size) {
        if (L > 1 && in_level(cur, L - 1)) return true;
        return emit(cur);
      }
      for (std::size_t i = start; i < R.size(); ++i) {
        cur.push_back(R[i]);
        const bool go = rec(i + 1, size);
        cur.pop_back();
        if (!go) return false;
      }
      return true;
    };
    for (std::size_t size = 1; size <= L; ++size)
      if (!rec(0, size)) return false;
    return true;
  };
  auto emit = [&](const std::vector<Rational>& r) {
    out.push_back(TargetMeasure::make(r));
    return out.size() < count;
  };
  for (std::size_t top = 1; out.size() < count; ++top)
    for (std::size_t L = 1; L <= top && out.size() < count; ++L)
      if (!visit_level(L, emit)) break;
  return out;
}

double tau(const TargetMeasure& phi) {
  require_target(phi);
  double t = 1.0;
  for (const Frac& f : separations(phi)) t = std::min(t, static_cast<double>(f.num) / static_cast<double>(f.den));
  return t;
}

double log_block_sup(const SparsePolynomial& p, double r_m) {
  if (p.terms().empty()) return kNegInf;
  const double R = 2.0 * r_m;
  const double cap = p.log_abs_sum_at(R);
  const std::size_t nodes = std::max<std::size_t>(4096, 8 * static_cast<std::size_t>(std::max<long>(p.degree(), 0)));
  double best = kNegInf;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double th = 2.0 * std::numbers::pi * double(i) / double(nodes);
    best = std::max(best, p.log_abs_at(std::polar(R, th)));
  }
  return std::min(cap, best + std::log(1.05));
}

double block_sup(const Polynomial& p, double r_m) { return std::exp(log_block_sup(SparsePolynomial::from_dense(p), r_m)); }

std::size_t choose_N(const TargetMeasure& phi, std::size_t k, std::size_t d_prev, double log_A) {
  require_target(phi);
  if (k < 1) throw DomainError("choose_N: k must be at least 1");
  const double r1 = phi.radii.front().value();
  const double need = (log_A - static_cast<double>(phi.m()) * std::log(kThreeMinusE)) / std::log((r1 + 1.0) / 2.0);
  const double lc = log_binomial(phi.m(), (phi.m() + 1) / 2);
  std::size_t N = d_prev + 1;
  N = std::max(N, static_cast<std::size_t>(std::max(0.0, std::floor(lc / std::log1p(1.0 / double(k))))));
  N = std::max(N, static_cast<std::size_t>(std::max(0.0, std::floor(need))));
  N = std::max<std::size_t>(N, 1);
  auto ok = [&](std::size_t n) { return n > d_prev && star2(phi, k, n) && star3(phi, n, log_A); };
  while (!ok(N)) ++N;
  while (N > 1 && ok(N - 1)) --N;
  return N;
}

std::size_t choose_M(const TargetMeasure& phi, std::size_t k, std::size_t N, std::size_t d_prev) {
  require_target(phi);
  if (k < 1) throw DomainError("choose_M: k must be at least 1");
  // Every condition is monotone in M: find a feasible power of two, then bisect.
  std::size_t hi = 1;
  while (!choose_M_ok(phi, k, N, d_prev, hi)) hi *= 2;
  std::size_t lo = hi / 2;  // infeasible (or 0)
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (choose_M_ok(phi, k, N, d_prev, mid) ? hi : lo) = mid;
  }
  return hi;
}

BuildState step(const BuildState& state, const TargetMeasure& phi) {
  require_target(phi);
  const std::size_t k = state.k + 1;
  const double rm = phi.radii.back().value();
  const double log_A = log_block_sup(state.P, rm);
  const std::size_t N = choose_N(phi, k, state.d, log_A);
  const std::size_t M = choose_M(phi, k, N, state.d);
  const std::size_t m = phi.m();

  // prod_j (1 - x_j w) with x_j = r_j^{-M}, w = z^M: coefficient of w^s is (-1)^s e_s(x).
  std::vector<double> log_e(m + 1, kNegInf);
  log_e[0] = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double lx = -static_cast<double>(M) * std::log(phi.radii[j].value());
    for (std::size_t s = j + 1; s >= 1; --s) log_e[s] = log_add(log_e[s], log_e[s - 1] + lx);
  }
  std::vector<ScaledTerm> block;
  for (std::size_t s = 0; s <= m; ++s)
    block.push_back({N + s * M, Complex{s % 2 == 0 ? 1.0 : -1.0, 0.0}, log_e[s]});

  BuildState next = state;
  next.k = k;
  next.d = N + m * M;
  next.P.append(block, next.d);

  StepRecord rec;
  rec.k = k;
  rec.target = phi;
  rec.N = N;
  rec.M = M;
  rec.d_prev = state.d;
  rec.d = next.d;
  rec.tau = tau(phi);
  rec.log_A = log_A;
  next.history.push_back(rec);
  return next;
}

StepRecord verify_step(const BuildState& state, const TargetMeasure& phi, std::size_t workers) {
  if (state.history.empty()) throw DomainError("verify_step: no step to verify");
  StepRecord rec = state.history.back();
  rec.audited = true;
  const std::size_t m = phi.m();
  const std::size_t M = rec.M, N = rec.N;
  const double kd = static_cast<double>(rec.k);
  auto fail = [&](const std::string& why) {
    if (rec.failure.empty()) rec.failure = why;
  };

  // Structure.
  std::vector<ScaledTerm> prev_terms;
  bool coeff_n = false;
  for (const auto& t : state.P.terms()) {
    if (t.power <= rec.d_prev) prev_terms.push_back(t);
    if (t.power == N) coeff_n = t.unit == Complex{1.0, 0.0} && t.log_abs == 0.0;
  }
  const SparsePolynomial prev(prev_terms, rec.d_prev);
  rec.structure_ok = coeff_n && rec.d == N + m * M && state.P.degree() == long(rec.d) &&
                     state.P.formal_degree() == rec.d && N > rec.d_prev;
  if (!rec.structure_ok) fail("structure");

  // Zeros.
  ZeroSet z;
  try {
    z = find_zeros(state.P);
  } catch (const NonConvergenceError& e) {
    fail(std::string("root finder: ") + e.what());
    return rec;
  }
  for (const auto& w : z.finite_zeros) rec.max_backward_error = std::max(rec.max_backward_error, backward_error(state.P, w));

  // Disk census: zero w can only lie in the disk of radius j around the M-th root
  // nearest to its argument.
  std::vector<double> r(m);
  for (std::size_t j = 0; j < m; ++j) r[j] = phi.radii[j].value();
  std::vector<std::size_t> counts(m * M, 0);
  std::vector<std::vector<double>> disk_moduli(m);
  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& w : z.finite_zeros) {
    const double arg = std::arg(w);
    long l = std::lround(arg * double(M) / two_pi);
    l = ((l % long(M)) + long(M)) % long(M);
    const Complex eta = std::polar(1.0, two_pi * double(l) / double(M));
    bool placed = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(w - r[j] * eta) < r[j] / double(M)) {
        ++counts[j * M + std::size_t(l)];
        disk_moduli[j].push_back(std::abs(w));
        placed = true;
      }
    }
    if (!placed) ++rec.disks.outside;
  }
  rec.disks.disks = m * M;
  for (std::size_t c : counts) {
    if (c == 1) ++rec.disks.exactly_one;
    else if (c == 0) ++rec.disks.empty;
    else ++rec.disks.multiple;
  }
  if (!rec.disks.ok()) fail("disk census");

  // Boundary samples of every disk.
  struct Margins {
    double factor = std::numeric_limits<double>::infinity();
    double product = std::numeric_limits<double>::infinity();
    double rouche = std::numeric_limits<double>::infinity();
    double prev = kNegInf;
  };
  std::vector<Margins> per_disk(m * M);
  const double log_floor = double(m) * std::log(kThreeMinusE);
  parallel_for(m * M, workers, [&](std::size_t idx) {
    const std::size_t j = idx / M, l = idx % M;
    const Complex center = r[j] * std::polar(1.0, two_pi * double(l) / double(M));
    Margins& g = per_disk[idx];
    for (std::size_t s = 0; s < kBoundarySamples; ++s) {
      const Complex zz = center + (r[j] / double(M)) * std::polar(1.0, two_pi * double(s) / double(kBoundarySamples));
      const double lz = std::log(std::abs(zz));
      const double th = std::arg(zz);
      double log_prod = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double lw = double(M) * (lz - std::log(r[i]));
        const double theta = std::remainder(double(M) * th, two_pi);
        const double lf = log_abs_one_minus(lw, theta);
        if (i == j) g.factor = std::min(g.factor, std::exp(lf) - kThreeMinusE);
        log_prod += lf;
      }
      g.product = std::min(g.product, log_prod - log_floor);
      const double lp = prev.log_abs_at(zz);
      g.prev = std::max(g.prev, lp);
      g.rouche = std::min(g.rouche, double(N) * lz + log_prod - lp);
    }
  });
  rec.min_factor_margin = std::numeric_limits<double>::infinity();
  rec.min_product_margin = std::numeric_limits<double>::infinity();
  rec.min_rouche_margin = std::numeric_limits<double>::infinity();
  rec.max_log_prev = kNegInf;
  for (const auto& g : per_disk) {
    rec.min_factor_margin = std::min(rec.min_factor_margin, g.factor);
    rec.min_product_margin = std::min(rec.min_product_margin, g.product);
    rec.min_rouche_margin = std::min(rec.min_rouche_margin, g.rouche);
    rec.max_log_prev = std::max(rec.max_log_prev, g.prev);
  }
  if (rec.min_factor_margin < -1e-12 || rec.min_product_margin < -1e-12) fail("factor margin");
  if (!(rec.min_rouche_margin > 0.0)) fail("Rouche inequality");

  // Distance to the target.
  rec.distance = levy_distance(radial_projection(z), phi.measure());
  if (!(rec.distance <= 1.0 / kd)) fail("distance exceeds 1/k");

  // Separation-lemma hypotheses with eps = 1/k.
  const double eps = 1.0 / kd;
  rec.separation_applicable = true;
  for (std::size_t j = 1; j < m; ++j)
    if (r[j] - r[j - 1] < 2.0 * eps) rec.separation_applicable = false;
  bool inside = rec.disks.ok();
  for (std::size_t j = 0; j < m; ++j)
    for (double a : disk_moduli[j])
      if (!(std::abs(a - r[j]) < eps)) inside = false;
  const double h = double(rec.d) - double(m * M);
  rec.separation_holds = inside && h / (double(m) * double(M)) < eps;
  if (rec.separation_applicable && !rec.separation_holds) fail("separation hypotheses");

  rec.verified = rec.failure.empty();
  return rec;
}

UniversalRun run_universal(const std::vector<TargetMeasure>& targets, std::size_t steps, std::size_t workers) {
  if (targets.empty()) throw DomainError("run_universal: no targets");
  UniversalRun run;
  for (std::size_t k = 1; k <= steps; ++k) {
    const TargetMeasure& phi = targets[(k - 1) % targets.size()];
    run.state = step(run.state, phi);
    run.state.history.back() = verify_step(run.state, phi, workers);
    if (!run.state.history.back().verified) {
      run.verified = false;
      break;
    }
  }
  return run;
}

nlohmann::json StepRecord::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["target"] = target.to_json();
  j["N"] = N;
  j["M"] = M;
  j["d_prev"] = d_prev;
  j["d"] = d;
  j["tau"] = tau;
  j["log_A"] = json_number(log_A);
  j["A"] = json_number(std::exp(log_A));
  if (audited) {
    j["distance"] = distance;
    j["distance_bound"] = 1.0 / double(k);
    j["disk_audit"] = {{"disks", disks.disks},
                       {"exactly_one", disks.exactly_one},
                       {"empty", disks.empty},
                       {"multiple", disks.multiple},
                       {"outside", disks.outside}};
    j["max_backward_error"] = max_backward_error;
    j["min_factor_margin"] = json_number(min_factor_margin);
    j["min_product_log_margin"] = json_number(min_product_margin);
    j["min_rouche_log_margin"] = json_number(min_rouche_margin);
    j["max_log_prev_on_disks"] = json_number(max_log_prev);
    j["separation_applicable"] = separation_applicable;
    j["separation_holds"] = separation_holds;
    j["structure_ok"] = structure_ok;
    j["verified"] = verified;
    if (!failure.empty()) j["failure"] = failure;
  }
  return j;
}

}  // namespace zsect
