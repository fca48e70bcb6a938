#include <doctest.h>

#include <cmath>

#include "zsect/gauge.hpp"
#include "zsect/measures.hpp"
#include "zsect/roots.hpp"

using namespace zsect;

namespace {

CoefficientStream S(const char* d) { return CoefficientStream::parse(d); }

// Direct O(N^2) evaluation of the tail-window surrogate from the coefficient values.
double l_bruteforce(const CoefficientStream& s, double gamma, std::size_t N) {
  const auto a = s.coefficients(N + 1);
  double best = HUGE_VAL;
  for (std::size_t n = N / 2; n <= N; ++n) {
    const auto lo = static_cast<std::size_t>(std::ceil((1 - gamma) * double(n) - 1e-9));
    double A = 0.0;
    for (std::size_t k = lo; k <= n; ++k) A = std::max(A, std::abs(a[k]));
    best = std::min(best, A == 0.0 ? 0.0 : std::pow(A, 1.0 / double(n)));
  }
  return best;
}

}  // namespace

TEST_CASE("window boundaries") {
  CHECK(window_start(10, 0.1) == 9);
  CHECK(window_start(100, 0.7) == 30);
  CHECK(window_start(7, 0.1) == 7);
  CHECK(window_start(3, 0.5) == 2);
}

TEST_CASE("window maxima") {
  CHECK(window_max(S("geometric"), 100, 0.1) == 1.0);
  CHECK(window_max(S("lacunary:2"), 7, 0.1) == 0.0);
  CHECK(window_max(S("carlson:0.5:0.5"), 7, 0.1) == doctest::Approx(std::pow(0.5, 7)).epsilon(1e-14));
  CHECK(window_max(S("lacunary:2"), 9, 0.2) == 1.0);  // window [8, 9]
}

TEST_CASE("liminf surrogate") {
  CHECK(L_estimate(S("geometric"), 0.2, 1024) == 1.0);
  CHECK(std::abs(L_estimate(S("carlson:0.5:0.5"), 0.1, 4096) - std::pow(0.5, 0.9)) <= 0.05);
  CHECK(L_estimate(S("lacunary:2"), 0.6, 4096) == 1.0);
  CHECK_THROWS_AS(L_estimate(S("geometric"), 0.2, 32), DomainError);

  for (const char* d : {"lacunary:3", "carlson:0.3:0.6", "inverse_one_minus_zN:5", "zero_one:primes"})
    for (double gamma : {0.05, 0.3, 0.7})
      CHECK(L_estimate(S(d), gamma, 512) == doctest::Approx(l_bruteforce(S(d), gamma, 512)).epsilon(1e-12));
}

TEST_CASE("gauge and index of named families") {
  const auto grid = default_gamma_grid();
  CHECK(grid.front() == 0.02);
  CHECK(grid.back() == 0.99);

  const GaugeReport g = gauge_and_index(S("geometric"), grid, 1024);
  CHECK(g.G_hat >= 0.99);
  CHECK(g.Gamma_hat <= grid.front());

  const GaugeReport l = gauge_and_index(S("lacunary:2"), grid, 4096);
  CHECK(l.Gamma_hat >= 0.45);
  CHECK(l.Gamma_hat <= 0.55);
  CHECK(l.G_hat <= 0.05);

  const GaugeReport c = gauge_and_index(S("carlson:0.3:0.6"), grid, 4096);
  CHECK(c.Gamma_hat >= 0.25);
  CHECK(c.Gamma_hat <= 0.35);
  CHECK(c.G_hat >= 0.55);
  CHECK(c.G_hat <= 0.65);

  for (const auto* r : {&g, &l, &c}) {
    for (std::size_t i = 1; i < r->L_hat.size(); ++i) CHECK(r->L_hat[i] >= r->L_hat[i - 1]);
    CHECK(r->G_hat == r->L_hat.front());
    CHECK(r->window_lo == r->horizon / 2);
  }
  CHECK_THROWS_AS(gauge_and_index(S("geometric"), {0.5, 0.2}, 1024), DomainError);
  CHECK_THROWS_AS(gauge_and_index(S("geometric"), {0.0, 0.2}, 1024), DomainError);
}

TEST_CASE("gauge report does not depend on worker count") {
  const auto grid = default_gamma_grid();
  const GaugeReport a = gauge_and_index(S("carlson:0.5:0.5"), grid, 2048, 1);
  const GaugeReport b = gauge_and_index(S("carlson:0.5:0.5"), grid, 2048, 4);
  CHECK(a.L_raw == b.L_raw);
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("Szego condition") {
  const SzegoEstimate g = szego_condition(S("geometric"), 1024);
  CHECK(g.liminf_hat == 1.0);
  CHECK(g.limsup_hat == 1.0);
  const SzegoEstimate z = szego_condition(S("inverse_one_minus_zN:3"), 1024);
  CHECK(z.liminf_hat == 0.0);
  CHECK(z.limsup_hat == 1.0);
  const SzegoEstimate c = szego_condition(S("carlson:0.5:0.5"), 4096);
  CHECK(c.limsup_hat == doctest::Approx(1.0));
  CHECK(c.liminf_hat == doctest::Approx(0.5));
}

TEST_CASE("gauge envelope") {
  CHECK(gauge_envelope(1.0, 1.5) == 1.0);
  CHECK(gauge_envelope(0.5, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(gauge_envelope(0.5, 2.0), DomainError);
  CHECK_THROWS_AS(gauge_envelope(0.0, 2.0), DomainError);
  CHECK_THROWS_AS(gauge_envelope(1.5, 2.0), DomainError);
}

TEST_CASE("infinite gap diagnostic") {
  CHECK(infinite_gap_diagnostic(S("geometric"), 720) == 1.0);
  CHECK(std::abs(infinite_gap_diagnostic(S("lacunary:2"), 4096) - 1.0) <= 0.1);
  // At N = 720 every window of relative length 0.99 still meets a factorial, so the gaps
  // show at a shorter window: n in (600, 720] sees no k! in [0.2 n, n].
  CHECK(infinite_gap_diagnostic(S("factorial_gaps"), 720, 0.8) == 0.0);
  CHECK(infinite_gap_diagnostic(S("lacunary:2"), 720, 0.8) == 1.0);
}

TEST_CASE("zero-one profile") {
  const ZeroOneProfile p = zero_one_profile(S("zero_one:0,1,4,9"), 10);
  CHECK(p.m_n == 9);
  CHECK(p.ratio == doctest::Approx(0.9));
  // The finite mass of rho_n equals m(n)/n.
  const auto z = find_zeros(section(S("zero_one:0,1,4,9"), 10));
  CHECK(1.0 - radial_projection(z).mass_at_infinity() == doctest::Approx(p.ratio));
  CHECK_THROWS_AS(zero_one_profile(S("lacunary:2"), 10), DomainError);  // a_0 = 0
  CHECK_THROWS_AS(zero_one_profile(S("carlson:0.5:0.5"), 10), DomainError);
}

TEST_CASE("gauge one forces zeros towards the circle") {
  const std::size_t N = 2048;
  for (const char* d : {"geometric", "inverse_one_minus_zN:3", "zero_one:squares"}) {
    const auto s = S(d);
    if (gauge_and_index(s, default_gamma_grid(), N).G_hat < 0.95) continue;
    for (std::size_t n : {N / 2, 3 * N / 4, N}) CHECK(counting_fn(find_zeros(section(s, n)), 1.2) >= 0.9);
  }
}

TEST_CASE("zero gauge keeps zeros away from the circle") {
  for (std::size_t k : {7u, 8u}) {
    const std::size_t n = (std::size_t{1} << k) - 1;
    const ZeroSet z = find_zeros(section(S("lacunary:2"), n));
    for (double T : {2.0, 4.0}) CHECK(counting_fn(z, T) <= 0.9);
  }
}
