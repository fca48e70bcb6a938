#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zsect/roots.hpp"
#include "zsect/universal.hpp"

using namespace zsect;

namespace {

const double kThreeMinusE = 3.0 - std::numbers::e;

TargetMeasure T(std::vector<double> r) {
  std::vector<Rational> q;
  for (double x : r) q.push_back(Rational::from_double(x));
  return TargetMeasure::make(q);
}

// Independent floating-point re-derivation of the smallest admissible N.
std::size_t oracle_N(const std::vector<double>& r, std::size_t k, std::size_t d_prev, double log_A) {
  const std::size_t m = r.size();
  const double c = std::tgamma(m + 1.0) / (std::tgamma(std::ceil(m / 2.0) + 1) * std::tgamma(m - std::ceil(m / 2.0) + 1));
  for (std::size_t N = d_prev + 1;; ++N)
    if (std::pow(c, 1.0 / N) <= 1 + 1.0 / k && N * std::log((r[0] + 1) / 2) + m * std::log(kThreeMinusE) > log_A) return N;
}

std::size_t oracle_M(const std::vector<double>& r, std::size_t k, std::size_t N, std::size_t d_prev) {
  double tau = 1.0;
  for (std::size_t j = 1; j < r.size(); ++j) tau = std::min(tau, (r[j] - r[j - 1]) / (r[j] + r[j - 1]));
  const double m = double(r.size());
  for (std::size_t M = 1;; ++M) {
    const double Md = double(M);
    if (1.0 / Md <= tau + 1e-15 && r[0] * (1 - 1 / Md) > (1 + r[0]) / 2 && r.back() / Md <= 1.0 / k &&
        double(N + d_prev) < m * Md / double(k))
      return M;
  }
}

}  // namespace

TEST_CASE("rationals") {
  CHECK(Rational::parse("3/2") == Rational::make(3, 2));
  CHECK(Rational::parse("6/4") == Rational::make(3, 2));
  CHECK(Rational::parse("1.25") == Rational::make(5, 4));
  CHECK(Rational::parse("2") == Rational::make(2, 1));
  CHECK(Rational::from_double(1.5) == Rational::make(3, 2));
  CHECK(Rational::from_double(4.0 / 3.0) == Rational::make(4, 3));
  CHECK(Rational::make(3, -6) == Rational::make(-1, 2));
  CHECK(Rational::make(7, 3).str() == "7/3");
  CHECK_THROWS_AS(Rational::make(1, 0), DomainError);
  CHECK_THROWS_AS(Rational::parse("x/2"), DomainError);
}

TEST_CASE("target measures") {
  CHECK_THROWS_AS(T({1.0}), DomainError);
  CHECK_THROWS_AS(T({2.0, 1.5}), DomainError);
  CHECK_THROWS_AS(T({}), DomainError);
  const auto t = parse_targets(nlohmann::json::parse(R"({"radii": ["3/2", 2]})"));
  REQUIRE(t.size() == 1);
  CHECK(t[0].radii == std::vector<Rational>{Rational::make(3, 2), Rational::make(2, 1)});
  CHECK(parse_targets(nlohmann::json::parse(R"([{"radii": [2]}, {"radii": [3, 4]}])")).size() == 2);
  CHECK(parse_targets(nlohmann::json::parse(R"({"targets": [[2], [3]]})")).size() == 2);
  CHECK(t[0].measure().cdf(1.75) == doctest::Approx(0.5));
}

TEST_CASE("diagonal enumeration revisits every target") {
  const auto d = diagonal_targets(400);
  REQUIRE(d.size() == 400);
  CHECK(d[0].radii == std::vector<Rational>{Rational::make(2, 1)});
  auto count = [&](const TargetMeasure& t) {
    return std::count_if(d.begin(), d.end(), [&](const TargetMeasure& x) { return x.radii == t.radii; });
  };
  // delta_2 appears once per level, so repeatedly.
  CHECK(count(T({2.0})) >= 3);
  CHECK(count(T({1.5, 2.0})) >= 2);
}

TEST_CASE("tau") {
  CHECK(tau(T({1.5, 2.0})) == doctest::Approx(1.0 / 7).epsilon(1e-15));
  CHECK(tau(T({2.0})) == 1.0);
  CHECK(tau(T({1.1, 1.2, 1.3})) == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("block sup") {
  CHECK(block_sup(Polynomial::from_real({1}), 2.0) == 1.0);
  CHECK(block_sup(Polynomial::from_real({0, 1}), 2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(block_sup(Polynomial::from_real({1, 0, 1}), 1.0) == doctest::Approx(5.0).epsilon(1e-15));
  // 1 + z + i z^2: the phases never align, so the estimate must still cover the true maximum.
  const Polynomial p(std::vector<Complex>{1.0, 1.0, {0.0, 1.0}});
  double true_max = 0.0;
  for (int i = 0; i < 200000; ++i) true_max = std::max(true_max, std::abs(p(std::polar(4.0, 2 * std::numbers::pi * i / 200000))));
  const double A = block_sup(p, 2.0);
  CHECK(A >= true_max);
  CHECK(A <= 1.05 * true_max * (1 + 1e-9));
}

TEST_CASE("choice of N and M") {
  CHECK(choose_N(T({1.5, 2.0}), 1, 0, 0.0) == 12);
  CHECK(choose_N(T({2.0}), 1, 0, 0.0) == 4);
  CHECK(choose_N(T({2.0}), 1, 100, 0.0) >= 101);
  CHECK(choose_M(T({1.5, 2.0}), 1, 12, 0) == 7);
  CHECK(choose_M(T({2.0}), 1, 4, 0) == 5);
  CHECK(choose_M(T({3.0}), 10, 1, 0) >= 30);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(5, 40), cnt(1, 4), kk(1, 12), dp(0, 300);
  std::uniform_real_distribution<double> la(0.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r;
    double x = 1.0;
    for (int j = cnt(rng); j > 0; --j) r.push_back(x += num(rng) / 8.0);
    const auto phi = T(r);
    const std::size_t k = kk(rng), d = dp(rng);
    const double logA = la(rng);
    const std::size_t N = choose_N(phi, k, d, logA);
    CHECK(N == oracle_N(r, k, d, logA));
    CHECK(choose_M(phi, k, N, d) == oracle_M(r, k, N, d));
  }
}

TEST_CASE("first step of the construction") {
  const TargetMeasure phi = T({1.5, 2.0});
  const BuildState s = step(BuildState{}, phi);
  CHECK(s.k == 1);
  CHECK(s.d == 26);
  REQUIRE(s.history.size() == 1);
  const StepRecord& r = s.history[0];
  CHECK(r.N == 12);
  CHECK(r.M == 7);
  CHECK(r.d == r.N + 2 * r.M);
  CHECK(r.tau == doctest::Approx(1.0 / 7));
  CHECK(s.P.degree() == 26);

  // Coefficients: 1 at index 0, 1 at index N, and the rest from the product.
  const Polynomial dense = s.P.to_dense();
  CHECK(dense[0] == Complex{1.0, 0.0});
  CHECK(std::abs(dense[12] - 1.0) < 1e-15);
  for (std::size_t j = 1; j < 12; ++j) CHECK(dense[j] == Complex{0.0, 0.0});
  // Block = z^12 (1 - (2z/3)^7)(1 - (z/2)^7): the z^26 term is (2/3)^7 / 2^7 = 3^{-7}.
  CHECK(dense[26].real() == doctest::Approx(std::pow(3.0, -7)).epsilon(1e-13));
  CHECK(dense[19].real() == doctest::Approx(-(std::pow(2.0 / 3, 7) + std::pow(0.5, 7))).epsilon(1e-13));

  const StepRecord v = verify_step(s, phi);
  CHECK(v.verified);
  CHECK(v.structure_ok);
  CHECK(v.disks.disks == 14);
  CHECK(v.disks.exactly_one == 14);
  CHECK(v.distance <= 1.0);
  CHECK(v.min_factor_margin >= 0.0);
  CHECK(v.min_rouche_margin > 0.0);
  CHECK(v.max_backward_error <= kDefaultRootTol);
}

TEST_CASE("disk census against an independent count") {
  const TargetMeasure phi = T({1.5, 2.0});
  const BuildState s = step(BuildState{}, phi);
  const ZeroSet z = find_zeros(s.P);
  for (double r : {1.5, 2.0})
    for (int l = 0; l < 7; ++l) {
      const Complex c = std::polar(r, 2 * std::numbers::pi * l / 7);
      const auto inside = std::count_if(z.finite_zeros.begin(), z.finite_zeros.end(),
                                        [&](Complex w) { return std::abs(w - c) < r / 7; });
      CHECK(inside == 1);
    }
}

TEST_CASE("factor lower bound near roots of unity") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double r : {1.5, 2.0})
    for (int M : {7, 16}) {
      int tested = 0;
      while (tested < 1000) {
        const Complex z{3 * r * u(rng), 3 * r * u(rng)};
        if (std::abs(z) > 3 * r) continue;
        double dist = HUGE_VAL;
        for (int l = 0; l < M; ++l) dist = std::min(dist, std::abs(z - std::polar(r, 2 * std::numbers::pi * l / M)));
        if (dist < r / M) continue;
        ++tested;
        CHECK(std::abs(1.0 - std::pow(z / r, M)) >= kThreeMinusE - 1e-12);
      }
      // The bound is nearly attained on the disk boundary.
      double worst = HUGE_VAL;
      for (int i = 0; i < 720; ++i) {
        const Complex z = r * (1.0 + std::polar(1.0 / M, 2 * std::numbers::pi * i / 720));
        worst = std::min(worst, std::abs(1.0 - std::pow(z / r, M)));
      }
      CHECK(worst >= kThreeMinusE - 1e-12);
      CHECK(worst <= 1.0);
    }
}

TEST_CASE("product lower bound") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<double> radii{1.5, 2.0};
  const int M = 7;
  int tested = 0;
  while (tested < 1000) {
    const Complex z{6 * u(rng), 6 * u(rng)};
    bool ok = true;
    double prod = 1.0;
    for (double r : radii) {
      for (int l = 0; l < M; ++l) ok = ok && std::abs(z - std::polar(r, 2 * std::numbers::pi * l / M)) >= r / M;
      prod *= std::abs(1.0 - std::pow(z / r, M));
    }
    if (!ok) continue;
    ++tested;
    CHECK(prod >= kThreeMinusE * kThreeMinusE - 1e-12);
  }
}

TEST_CASE("distance lemma on randomized instances") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> mm(1, 4), kk(1, 30);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = mm(rng), k = kk(rng);
    std::vector<double> r;
    double x = 1.0;
    for (int j = 0; j < m; ++j) r.push_back(x += 0.2 + u(rng));
    double gap = HUGE_VAL;
    for (int j = 1; j < m; ++j) gap = std::min(gap, r[j] - r[j - 1]);
    const double eps = std::min(0.5 * gap, 0.05 + 0.4 * u(rng));  // intervals pairwise disjoint
    const int h = static_cast<int>(std::floor(eps * m * k * u(rng)));
    if (double(h) >= eps * m * k) continue;
    std::vector<RadialAtom> atoms;
    const double w = 1.0 / double(m * k + h);
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < k; ++l) atoms.push_back({r[j] + eps * (2 * u(rng) - 1) * 0.999, w});
    for (int i = 0; i < h; ++i) atoms.push_back({u(rng) < 0.3 ? HUGE_VAL : 10 * u(rng), w});
    std::vector<RadialAtom> target;
    for (double q : r) target.push_back({q, 1.0 / m});
    CHECK(levy_distance(RadialMeasure::from_atoms(target), RadialMeasure::from_atoms(atoms)) < eps);
  }
}

TEST_CASE("verification reports failures instead of throwing") {
  const TargetMeasure phi = T({1.5, 2.0});
  BuildState s = step(BuildState{}, phi);
  // Audit against a different target: the distance check must fail.
  const StepRecord v = verify_step(s, T({5.0}));
  CHECK(!v.verified);
  CHECK(!v.failure.empty());
}

TEST_CASE("several steps cycling two targets") {
  const std::vector<TargetMeasure> targets{T({8.0}), T({4.0, 6.0})};
  const UniversalRun run = run_universal(targets, 3);
  CHECK(run.verified);
  REQUIRE(run.state.history.size() == 3);
  std::size_t prev = 0;
  for (const auto& r : run.state.history) {
    CHECK(r.distance <= 1.0 / double(r.k));
    CHECK(r.d == r.N + r.target.m() * r.M);
    CHECK(r.N > prev);
    CHECK(r.disks.ok());
    prev = r.d;
  }
  // Workers only split the disk audit; the record is unchanged.
  const UniversalRun again = run_universal(targets, 2, 3);
  CHECK(again.state.history[1].to_json() == run.state.history[1].to_json());
}
