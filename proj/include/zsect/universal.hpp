#pragma once

// Iterative construction of a power series whose radial zero measures approach
// every finitely supported target (1/m) sum delta_{r_j}, 1 < r_1 < ... < r_m
// rational. Step k appends z^N prod_j (1 - (z/r_j)^M) to the current section and
// audits the result with the root finder.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsect/measures.hpp"
#include "zsect/polynomial.hpp"

namespace zsect {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  /// Reduced, den > 0. Throws DomainError when den = 0.
  static Rational make(std::int64_t num, std::int64_t den);
  /// Exact for "p/q" and decimal strings; doubles go through continued fractions
  /// (denominator <= 10^6, error <= 1e-12 relative) and throw if not matched.
  static Rational parse(const std::string& text);
  static Rational from_double(double x);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// (1/m) sum delta_{r_j}.
struct TargetMeasure {
  std::vector<Rational> radii;

  /// Throws DomainError unless 1 < r_1 < ... < r_m.
  static TargetMeasure make(std::vector<Rational> radii);
  std::size_t m() const { return radii.size(); }
  RadialMeasure measure() const;
  nlohmann::json to_json() const;
};

/// Accepts {"radii": [...]}, a list of those, or {"targets": [...]}. Radii are
/// numbers or "p/q" strings.
std::vector<TargetMeasure> parse_targets(const nlohmann::json& j);

/// Targets in diagonal order: level L lists every target with at most L atoms in
/// (1, L + 1] with denominators at most L; the sequence is levels 1, 1..2, 1..3, ...
/// so every target recurs infinitely often.
std::vector<TargetMeasure> diagonal_targets(std::size_t count);

/// min over consecutive radii of (r_j - r_{j-1}) / (r_j + r_{j-1}); 1 when m = 1.
double tau(const TargetMeasure& phi);

/// Upper estimate of ln max{|P(z)| : |z| <= 2 r_m}: the smaller of ln(1.05 max over
/// circle samples) and ln sum |b_j| (2 r_m)^j. Samples: max(4096, 8 deg P) nodes.
double log_block_sup(const SparsePolynomial& p, double r_m);
double block_sup(const Polynomial& p, double r_m);

/// Smallest N with N > d_prev, binom(m, ceil(m/2))^{1/N} <= 1 + 1/k and
/// N ln((r_1 + 1)/2) + m ln(3 - e) > ln A.
std::size_t choose_N(const TargetMeasure& phi, std::size_t k, std::size_t d_prev, double log_A);

/// Smallest M with 1/M <= tau, r_1 (1 - 1/M) > (1 + r_1)/2, r_m/M <= 1/k and
/// N + d_prev < m M / k. Evaluated in exact integer arithmetic.
std::size_t choose_M(const TargetMeasure& phi, std::size_t k, std::size_t N, std::size_t d_prev);

struct DiskAudit {
  std::size_t disks = 0;
  std::size_t exactly_one = 0;
  std::size_t empty = 0;
  std::size_t multiple = 0;
  std::size_t outside = 0;  // zeros in no disk
  bool ok() const { return disks > 0 && exactly_one == disks; }
};

struct StepRecord {
  std::size_t k = 0;
  TargetMeasure target;
  std::size_t N = 0;
  std::size_t M = 0;
  std::size_t d_prev = 0;
  std::size_t d = 0;
  double tau = 0.0;
  double log_A = 0.0;

  // Filled by verify_step.
  bool audited = false;
  double distance = 0.0;
  DiskAudit disks;
  double max_backward_error = 0.0;
  double min_factor_margin = 0.0;   // min over samples of |1 - (z/r_j)^M| - (3 - e)
  double min_product_margin = 0.0;  // min of ln|prod_j (1 - (z/r_j)^M)| - m ln(3 - e)
  double min_rouche_margin = 0.0;   // min of ln|z^N prod| - ln|P_{k-1}(z)|
  double max_log_prev = 0.0;        // max of ln|P_{k-1}(z)| on the disk boundaries, <= log_A
  bool separation_applicable = false;  // intervals (r_j - 1/k, r_j + 1/k) disjoint
  bool separation_holds = false;       // disk zeros within them and h/(mM) < 1/k
  bool structure_ok = false;           // coefficient N is 1, earlier coefficients kept, d = N + mM
  bool verified = false;
  std::string failure;

  nlohmann::json to_json() const;
};

struct BuildState {
  SparsePolynomial P{{ScaledTerm{0, Complex{1.0, 0.0}, 0.0}}, 0};  // P_0 = 1
  std::size_t d = 0;
  std::size_t k = 0;
  std::vector<StepRecord> history;
};

/// Appends the block for step state.k + 1.
BuildState step(const BuildState& state, const TargetMeasure& phi);

/// Root-finds the newest P_k and audits it: one zero in each Rouche disk, factor and
/// product margins on 64 samples per disk boundary, the Rouche inequality against
/// P_{k-1}, the Levy distance to phi within 1/k, and the separation-lemma hypotheses
/// when applicable. Never throws for failed checks; sets verified = false.
StepRecord verify_step(const BuildState& state, const TargetMeasure& phi, std::size_t workers = 0);

struct UniversalRun {
  BuildState state;
  bool verified = true;
};

/// Steps 1..steps with targets[(k - 1) mod size]; stops at the first failed audit.
UniversalRun run_universal(const std::vector<TargetMeasure>& targets, std::size_t steps, std::size_t workers = 0);

}  // namespace zsect
