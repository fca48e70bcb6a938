#pragma once

// Seeded random coefficient ensembles and the Monte Carlo experiments built on
// them. Every random quantity is a pure function of (ensemble, parameters,
// seed): draw k of trial t comes from a counter-based hash of (seed, t, k), so
// results do not depend on evaluation order or worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsect/polynomial.hpp"

namespace zsect {

enum class Distribution { gaussian_complex, gaussian_real, uniform_disk, bernoulli, log_heavy_tail };

/// iid: every coefficient has the same law. inverse_n: Bernoulli with p_k = 1/k
/// for k >= 1 and p_0 = 1.
enum class Schedule { iid, inverse_n };

struct Ensemble {
  Distribution dist = Distribution::gaussian_complex;
  /// p for bernoulli, alpha for log_heavy_tail; unused otherwise.
  double param = 0.0;
  Schedule schedule = Schedule::iid;

  static Ensemble gaussian_complex() { return {Distribution::gaussian_complex, 0.0, Schedule::iid}; }
  static Ensemble gaussian_real() { return {Distribution::gaussian_real, 0.0, Schedule::iid}; }
  static Ensemble uniform_disk() { return {Distribution::uniform_disk, 0.0, Schedule::iid}; }
  static Ensemble bernoulli(double p);
  static Ensemble bernoulli_pn() { return {Distribution::bernoulli, 0.0, Schedule::inverse_n}; }
  static Ensemble log_heavy_tail(double alpha);

  bool is_iid() const { return schedule == Schedule::iid; }
  /// sup_n E((ln+|X_n|)^{1+eps}) < inf for some eps > 0. Declared per family.
  bool has_log_moment() const;
  /// inf_n P(|X_n| >= delta) > 0 for the declared delta. Declared per family.
  bool uniformly_non_null() const;

  /// Parses "gaussian_complex", "bernoulli:0.5", "bernoulli_pn", "log_heavy_tail:0.5", ...
  static Ensemble parse(const std::string& text);
  std::string name() const;
  nlohmann::json to_json() const;
  static Ensemble from_json(const nlohmann::json& j);

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

/// Independent 64-bit substream for trial `trial` of a run seeded with `seed`.
std::uint64_t trial_stream(std::uint64_t seed, std::uint64_t trial);

/// Coefficient k of the path identified by `stream`.
Complex draw(const Ensemble& e, std::uint64_t stream, std::size_t k);
/// ln|coefficient k|, exact even where |X_k| overflows a double (heavy tails).
double draw_log_abs(const Ensemble& e, std::uint64_t stream, std::size_t k);

/// The n+1 coefficients X_0..X_n of trial 0 of `seed`.
std::vector<Complex> sample_coeffs(const Ensemble& e, std::size_t n, std::uint64_t seed);

struct TrialRecord {
  std::size_t trial = 0;
  bool ok = false;
  std::vector<double> cdf;  // F_{n,omega}(t) per grid point
  Complex weyl1{0.0, 0.0};
};

/// Monte Carlo estimate of the expected distribution function Phi_n.
struct MCReport {
  Ensemble ensemble;
  std::size_t n = 0;
  std::vector<double> t_grid;
  std::vector<double> phi_hat;
  std::vector<double> stderr_;
  std::size_t trials = 0;
  std::size_t completed = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  double mean_abs_weyl1 = 0.0;
  double stderr_abs_weyl1 = 0.0;
  std::vector<TrialRecord> records;

  nlohmann::json to_json() const;
};

MCReport mc_phi(const Ensemble& e, std::size_t n, const std::vector<double>& t_grid,
                std::size_t trials, std::uint64_t seed, std::size_t workers = 0);

/// Paired check of Phi_n(t) = 1 - Phi_n(1/t): lhs = mean F(t), rhs = 1 - mean F(1/t),
/// both over the same trials, stderr from the per-trial differences.
struct SymmetryReport {
  double t = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double diff = 0.0;
  double stderr_ = 0.0;
  /// Mean zero mass within 1e-9 (relative) of the circles |z| = t and |z| = 1/t.
  double boundary_allowance = 0.0;
  /// Largest per-trial |F(t^-) - (1 - F_rev(1/t))| between a section and its reversal.
  double reciprocity_defect = 0.0;
  std::size_t completed = 0;

  bool within(double sigmas) const { return std::abs(diff) <= sigmas * stderr_ + boundary_allowance; }
  nlohmann::json to_json() const;
};

SymmetryReport phi_symmetry_check(const Ensemble& e, std::size_t n, double t, std::size_t trials,
                                  std::uint64_t seed, std::size_t workers = 0);

/// max over n in [N/2, N] of |X_n|^{1/n} along one sampled path.
double radius_dichotomy(const Ensemble& e, std::size_t horizon, std::uint64_t seed);

/// Tail-window liminf surrogate of A_n(gamma)^{1/n} along one sampled path.
double window_gauge_path(const Ensemble& e, double gamma, std::size_t horizon, std::uint64_t seed);

/// For each probe n: whether A_n(gamma) = 0 on the sampled path.
std::vector<bool> window_events(const Ensemble& e, double gamma, const std::vector<std::size_t>& probes,
                                std::uint64_t seed);

/// Powers of two 2, 4, ..., up to `limit`: windows [(1-gamma)n, n] at gamma = 1/2 that only touch at endpoints.
std::vector<std::size_t> dyadic_probes(std::size_t limit);

struct ConditionFlags {
  bool log_moment = false;          // sup_n E((ln+|X_n|)^{1+eps}) finite
  bool uniformly_non_null = false;  // inf_n P(|X_n| >= delta) > 0
  bool szego_almost_surely = false;
  std::string conclusion;
};

ConditionFlags check_conditions(const Ensemble& e);

}  // namespace zsect
