// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zsect/bounds.hpp"
#include "zsect/ensembles.hpp"
#include "zsect/gauge.hpp"
#include "zsect/measures.hpp"
#include "zsect/roots.hpp"
#include "zsect/series.hpp"
#include "zsect/universal.hpp"

using namespace zsect;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) notes << what;
      else notes << "; " << what;
      ok = false;
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs <= budget_s, "runtime " + std::to_string(secs) + " s over budget");
  std::printf("%s criterion %d: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, title, secs, c.ok ? "" : " -- ",
              c.notes.str().c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

Polynomial gaussian_poly(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<Complex> c(n + 1);
  for (auto& x : c) x = {g(rng), g(rng)};
  return Polynomial(c);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

long double binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Criterion 8 statistics, reused by the determinism check.
struct EnsembleStats {
  std::vector<double> numbers;
};

EnsembleStats ensemble_stats(const Ensemble& e, std::size_t workers) {
  EnsembleStats s;
  const MCReport r = mc_phi(e, 256, {0.9, 1.0, 1.1}, 120, 2024, workers);
  s.numbers = {r.phi_hat[0], r.phi_hat[1], r.phi_hat[2], r.stderr_[1], r.mean_abs_weyl1, double(r.completed)};
  const SymmetryReport y = phi_symmetry_check(e, 256, 0.8, 120, 77, workers);
  s.numbers.insert(s.numbers.end(), {y.diff, y.stderr_, y.boundary_allowance});
  return s;
}

}  // namespace

int main() {
  criterion(1, "geometric sections: zeros are the nontrivial roots of unity", 1.0, [](Check& c) {
    for (std::size_t n : {3u, 15u, 63u}) {
      const ZeroSet z = find_zeros(section(CoefficientStream::geometric(), n));
      c.expect(z.finite_zeros.size() == n && z.infinity_count == 0, "wrong zero count");
      std::vector<Complex> roots;
      for (std::size_t k = 1; k <= n; ++k) roots.push_back(std::polar(1.0, 2 * std::numbers::pi * double(k) / double(n + 1)));
      double worst = 0.0;
      for (const auto& w : z.finite_zeros) {
        double best = HUGE_VAL;
        std::size_t at = 0;
        for (std::size_t i = 0; i < roots.size(); ++i)
          if (std::abs(roots[i] - w) < best) best = std::abs(roots[i] - w), at = i;
        worst = std::max(worst, best);
        roots.erase(roots.begin() + long(at));
      }
      c.expect(worst <= 1e-8, "n=" + std::to_string(n) + " max distance " + fmt(worst));
      c.expect(counting_fn(z, 1.1) == 1.0, "F(1.1) != 1");
      c.expect(counting_fn(z, 0.9) == 0.0, "F(0.9) != 0");
    }
  });

  criterion(2, "Jensen identity and weak-type inequality", 30.0, [](Check& c) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> deg(1, 64);
    int tested = 0;
    double worst = 0.0;
    while (tested < 100) {
      const Polynomial p = gaussian_poly(rng, deg(rng));
      const ZeroSet z = find_zeros(p);
      bool near = false;
      for (const auto& w : z.finite_zeros) near = near || std::abs(std::abs(w) - 1.0) < 1e-3;
      if (near) continue;
      ++tested;
      const JensenResult j = jensen_identity(p, z, std::size_t{1} << 14);
      worst = std::max(worst, std::abs(j.lhs - j.rhs) / (1 + std::abs(j.lhs)));
      for (double T : {1.1, 2.0, 10.0}) c.expect(weak_jensen_check(p, z, T, std::size_t{1} << 14).holds(), "weak Jensen fails");
    }
    c.expect(worst <= 1e-6, "Jensen relative error " + fmt(worst));
  });

  criterion(3, "product of zeros, Viete inequalities, entropy bound", 10.0, [](Check& c) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> deg(1, 100);
    double worst_product = 0.0, worst_slack = HUGE_VAL;
    for (int trial = 0; trial < 100; ++trial) {
      const Polynomial p = gaussian_poly(rng, deg(rng));
      const VieteReport v = viete_checks(p, find_zeros(p));
      worst_product = std::max(worst_product, v.product_relative_error);
      worst_slack = std::min(worst_slack, v.min_slack());
    }
    c.expect(worst_product <= 1e-8, "product relative error " + fmt(worst_product));
    c.expect(worst_slack >= -1e-9, "negative Viete slack " + fmt(worst_slack));
    for (int n = 1; n <= 60; ++n)
      for (int k = 0; k <= n; ++k)
        c.expect(binom(n, k) <= std::exp((long double)n * entropy(double(k) / n)) * (1 + 1e-12L), "entropy bound fails");
  });

  criterion(4, "Cauchy and Van Vleck containment", 60.0, [](Check& c) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> deg(1, 128);
    std::uniform_real_distribution<double> mag(-3, 3);
    std::bernoulli_distribution zero(0.1);
    for (int trial = 0; trial < 500; ++trial) {
      Polynomial p = gaussian_poly(rng, deg(rng));
      // Scaled coefficients and occasional exact zeros (including b_0, which exercises deflation).
      std::vector<Complex> b = p.coeffs();
      for (auto& x : b) x *= std::pow(10.0, mag(rng));
      for (std::size_t k = 0; k + 1 < b.size(); ++k)
        if (zero(rng)) b[k] = 0.0;
      p = Polynomial(b);
      const std::size_t n = p.formal_degree();
      const ZeroSet z = find_zeros(p);
      const double C = cauchy_bound(p);
      const std::size_t o = p.origin_multiplicity();
      const Polynomial core(std::vector<Complex>(b.begin() + long(o), b.end()));
      const double cin = core.degree() >= 1 ? inner_cauchy_bound(core) : 0.0;
      for (const auto& w : z.finite_zeros) {
        if (w == Complex{0.0, 0.0}) continue;
        c.expect(std::abs(w) <= C * (1 + 1e-9), "zero outside C_P");
        c.expect(std::abs(w) >= cin * (1 - 1e-9), "zero inside c_P");
      }
      const auto mod = sorted_moduli(z);
      for (std::size_t m = 1; m <= n; ++m) {
        c.expect(mod[m - 1] <= van_vleck_bound(p, m) * (1 + 1e-9), "fewer than m zeros inside V^m");
        if (o == 0) c.expect(mod[n - m] >= inner_van_vleck_bound(p, m).value * (1 - 1e-9), "fewer than m zeros outside v^m");
      }
    }
    for (int n = 1; n <= 30; ++n)
      for (int m = 1; m <= n; ++m) {
        long double s = 0;
        for (int k = n - m + 1; k <= n; ++k) s += binom(k - 1, k - (n - m) - 1);
        c.expect(s == binom(n, m - 1), "binomial identity fails");
      }
  });

  criterion(5, "Newton identities against root-finder power sums", 10.0, [](Check& c) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> deg(4, 32);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Polynomial p = gaussian_poly(rng, deg(rng));
      const ZeroSet z = find_zeros(p);
      for (std::size_t m = 1; m <= 4; ++m) {
        Complex brute = 0;
        for (const auto& w : z.finite_zeros) brute += std::pow(w, -double(m));
        const Complex fast = power_sum_newton(p.coeffs(), m);
        worst = std::max(worst, std::abs(fast - brute) / std::max(1.0, std::abs(brute)));
      }
    }
    c.expect(worst <= 1e-8, "relative disagreement " + fmt(worst));
  });

  criterion(6, "gauge and index of lacunary and prescribed-index series", 30.0, [](Check& c) {
    const auto grid = default_gamma_grid();
    for (std::size_t q : {2u, 3u}) {
      const GaugeReport r = gauge_and_index(CoefficientStream::lacunary(q), grid, 4096);
      const double target = 1.0 - 1.0 / double(q);
      c.expect(std::abs(r.Gamma_hat - target) <= 0.05, "lacunary " + std::to_string(q) + " index " + fmt(r.Gamma_hat));
      c.expect(r.G_hat <= 0.05, "lacunary gauge " + fmt(r.G_hat));
    }
    for (auto [t, g] : {std::pair{0.3, 0.6}, std::pair{0.5, 0.5}}) {
      const auto s = CoefficientStream::carlson_lemma(t, g);
      const GaugeReport r = gauge_and_index(s, grid, 4096);
      c.expect(std::abs(r.Gamma_hat - t) <= 0.05, "carlson index " + fmt(r.Gamma_hat));
      c.expect(std::abs(r.G_hat - g) <= 0.05, "carlson gauge " + fmt(r.G_hat));
      const double L = L_estimate(s, t / 2, 4096);
      c.expect(std::abs(L - std::pow(g, 1 - t / 2)) <= 0.05, "L(t/2) " + fmt(L));
    }
  });

  criterion(7, "gauge one clusters zeros at the circle; gauge zero does not", 120.0, [](Check& c) {
    for (const char* d : {"geometric", "inverse_one_minus_zN:3"})
      for (std::size_t n : {512u, 1024u}) {
        const double F = counting_fn(find_zeros(section(CoefficientStream::parse(d), n)), 1.2);
        c.expect(F >= 0.9, std::string(d) + " F(1.2) " + fmt(F));
      }
    for (std::size_t k : {7u, 8u, 9u}) {
      const ZeroSet z = find_zeros(section(CoefficientStream::lacunary(2), (std::size_t{1} << k) - 1));
      for (double T : {2.0, 4.0}) {
        const double F = counting_fn(z, T);
        c.expect(F <= 0.9, "lacunary F(" + fmt(T) + ") " + fmt(F));
      }
    }
  });

  criterion(8, "random ensembles: radial and angular limits, symmetry, window events", 300.0, [](Check& c) {
    for (const Ensemble& e : {Ensemble::gaussian_complex(), Ensemble::bernoulli(0.5)}) {
      const std::string name = e.name();
      const MCReport r = mc_phi(e, 256, {0.9, 1.0, 1.1}, 120, 2024);
      c.expect(r.completed >= 100, name + " completed " + std::to_string(r.completed));
      c.expect(r.phi_hat[2] >= 0.85, name + " F(1.1) " + fmt(r.phi_hat[2]));
      c.expect(r.phi_hat[0] <= 0.05, name + " F(0.9) " + fmt(r.phi_hat[0]));
      c.expect(r.mean_abs_weyl1 <= 0.2, name + " |weyl| " + fmt(r.mean_abs_weyl1));
      c.expect(std::abs(r.phi_hat[1] - 0.5) <= 3 * r.stderr_[1],
               name + " Phi(1) " + fmt(r.phi_hat[1]) + " stderr " + fmt(r.stderr_[1]));
      const SymmetryReport y = phi_symmetry_check(e, 256, 0.8, 120, 77);
      c.expect(std::abs(y.lhs - y.rhs) <= 3 * y.stderr_,
               name + " symmetry diff " + fmt(y.lhs - y.rhs) + " stderr " + fmt(y.stderr_));
    }
    const auto probes = dyadic_probes(std::size_t{1} << 17);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto ev = window_events(Ensemble::bernoulli_pn(), 0.5, probes, seed);
      c.expect(std::count(ev.begin(), ev.end(), true) >= 1, "no empty window for seed " + std::to_string(seed));
    }
  });

  criterion(9, "universal series: first step and four-step run", 120.0, [](Check& c) {
    const TargetMeasure phi = TargetMeasure::make({Rational::make(3, 2), Rational::make(2, 1)});
    // Independent re-derivation of N and M from the defining inequalities.
    std::size_t N0 = 1;
    while (!(std::pow(2.0, 1.0 / double(N0)) <= 2.0 && double(N0) * std::log(1.25) + 2 * std::log(3 - std::numbers::e) > 0.0)) ++N0;
    std::size_t M0 = 1;
    while (!(1.0 / double(M0) <= 1.0 / 7 + 1e-15 && 1.5 * (1 - 1.0 / double(M0)) > 1.25 && 2.0 / double(M0) <= 1.0 &&
             double(N0) < 2.0 * double(M0)))
      ++M0;
    const BuildState s = step(BuildState{}, phi);
    const StepRecord& r = s.history.back();
    c.expect(r.N == 12 && N0 == 12, "N=" + std::to_string(r.N) + " oracle " + std::to_string(N0));
    c.expect(r.M == 7 && M0 == 7, "M=" + std::to_string(r.M) + " oracle " + std::to_string(M0));
    c.expect(s.d == 26 && s.P.degree() == 26, "d=" + std::to_string(s.d));

    const ZeroSet z = find_zeros(s.P);
    int good = 0;
    for (double rad : {1.5, 2.0})
      for (int l = 0; l < 7; ++l) {
        const Complex ctr = std::polar(rad, 2 * std::numbers::pi * l / 7);
        good += std::count_if(z.finite_zeros.begin(), z.finite_zeros.end(), [&](Complex w) { return std::abs(w - ctr) < rad / 7; }) == 1;
      }
    c.expect(good == 14, std::to_string(good) + " of 14 disks hold exactly one zero");
    const double dist = levy_distance(radial_projection(z), phi.measure());
    c.expect(dist <= 1.0, "distance " + fmt(dist));
    const StepRecord v = verify_step(s, phi);
    c.expect(v.verified, "audit: " + v.failure);

    const std::vector<TargetMeasure> cycle{TargetMeasure::make({Rational::make(8, 1)}),
                                           TargetMeasure::make({Rational::make(4, 1), Rational::make(6, 1)})};
    const UniversalRun run = run_universal(cycle, 4);
    c.expect(run.verified && run.state.history.size() == 4, "four-step run not verified");
    for (const auto& h : run.state.history)
      c.expect(h.distance <= 1.0 / double(h.k), "step " + std::to_string(h.k) + " distance " + fmt(h.distance));
  });

  criterion(10, "determinism across worker counts", 300.0, [](Check& c) {
    for (const Ensemble& e : {Ensemble::gaussian_complex(), Ensemble::bernoulli(0.5)})
      c.expect(ensemble_stats(e, 1).numbers == ensemble_stats(e, 4).numbers, e.name() + " statistics differ");
    const auto grid = default_gamma_grid();
    const auto s = CoefficientStream::carlson_lemma(0.3, 0.6);
    c.expect(gauge_and_index(s, grid, 4096, 1).to_json() == gauge_and_index(s, grid, 4096, 4).to_json(), "gauge differs");
    const std::vector<TargetMeasure> cycle{TargetMeasure::make({Rational::make(8, 1)}),
                                           TargetMeasure::make({Rational::make(4, 1), Rational::make(6, 1)})};
    const UniversalRun a = run_universal(cycle, 3, 1), b = run_universal(cycle, 3, 4);
    for (std::size_t i = 0; i < a.state.history.size(); ++i)
      c.expect(a.state.history[i].to_json() == b.state.history[i].to_json(), "universal step differs");
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
