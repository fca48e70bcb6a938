#include "zsect/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "zsect/json_util.hpp"
#include "zsect/parallel.hpp"

namespace zsect {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
}

void require_horizon(std::size_t horizon) {
  if (horizon < 64) throw DomainError("horizon must be at least 64");
}

double root_of_log(double log_value, std::size_t n) {
  return log_value == kNegInf ? 0.0 : std::exp(log_value / static_cast<double>(n));
}

std::vector<double> isotonic(const std::vector<double>& y) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (double v : y) {
    blocks.push_back({v, 1});
    while (blocks.size() >= 2) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum / double(a.count) <= b.sum / double(b.count)) break;
      const Block merged{a.sum + b.sum, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.sum / double(b.count));
  return out;
}

}  // namespace

std::vector<double> default_gamma_grid() {
  return {0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
}

std::size_t window_start(std::size_t n, double gamma) {
  const double s = (1.0 - gamma) * static_cast<double>(n);
  const double fl = std::floor(s);
  if (s - fl <= 1e-9 * std::max(1.0, s)) return static_cast<std::size_t>(fl);
  return static_cast<std::size_t>(std::ceil(s));
}

double log_window_max(std::span<const double> log_abs, std::size_t n, double gamma) {
  require_gamma(gamma);
  if (n >= log_abs.size()) throw DomainError("log_window_max: not enough coefficients");
  double best = kNegInf;
  for (std::size_t k = window_start(n, gamma); k <= n; ++k) best = std::max(best, log_abs[k]);
  return best;
}

double window_max(const CoefficientStream& s, std::size_t n, double gamma) {
  if (n < 1) throw DomainError("window_max: n must be at least 1");
  const auto la = s.log_abs(n + 1);
  const double l = log_window_max(la, n, gamma);
  return l == kNegInf ? 0.0 : std::exp(l);
}

double l_estimate(std::span<const double> log_abs, double gamma, std::size_t horizon) {
  require_gamma(gamma);
  if (log_abs.size() < horizon + 1) throw DomainError("l_estimate: not enough coefficients");
  const std::size_t lo = horizon / 2;
  std::deque<std::size_t> dq;  // indices with decreasing log_abs
  std::size_t pushed = window_start(lo, gamma);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t n = lo; n <= horizon; ++n) {
    while (pushed <= n) {
      while (!dq.empty() && log_abs[dq.back()] <= log_abs[pushed]) dq.pop_back();
      dq.push_back(pushed++);
    }
    const std::size_t start = window_start(n, gamma);
    while (!dq.empty() && dq.front() < start) dq.pop_front();
    const double l = dq.empty() ? kNegInf : log_abs[dq.front()];
    best = std::min(best, root_of_log(l, std::max<std::size_t>(n, 1)));
  }
  return best;
}

double L_estimate(const CoefficientStream& s, double gamma, std::size_t horizon) {
  require_horizon(horizon);
  return l_estimate(s.log_abs(horizon + 1), gamma, horizon);
}

nlohmann::json GaugeReport::to_json() const {
  return {{"gamma_grid", gamma_grid},
          {"L_raw", L_raw},
          {"L_hat", L_hat},
          {"G_hat", G_hat},
          {"Gamma_hat", Gamma_hat},
          {"horizon", horizon},
          {"window", {window_lo, window_hi}}};
}

GaugeReport gauge_and_index(const CoefficientStream& s, const std::vector<double>& gamma_grid,
                            std::size_t horizon, std::size_t workers) {
  require_horizon(horizon);
  if (gamma_grid.empty()) throw DomainError("gauge_and_index: empty gamma grid");
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    require_gamma(gamma_grid[i]);
    if (i > 0 && !(gamma_grid[i] > gamma_grid[i - 1])) throw DomainError("gauge_and_index: grid must be increasing");
  }
  const auto la = s.log_abs(horizon + 1);
  GaugeReport r;
  r.gamma_grid = gamma_grid;
  r.horizon = horizon;
  r.window_lo = horizon / 2;
  r.window_hi = horizon;
  r.L_raw.resize(gamma_grid.size());
  parallel_for(gamma_grid.size(), workers, [&](std::size_t i) { r.L_raw[i] = l_estimate(la, gamma_grid[i], horizon); });
  r.L_hat = isotonic(r.L_raw);
  r.G_hat = r.L_hat.front();
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (r.L_hat[i] >= 1.0 - kIndexTolerance) {
      r.Gamma_hat = gamma_grid[i];
      break;
    }
  }
  return r;
}

SzegoEstimate szego_condition(const CoefficientStream& s, std::size_t horizon) {
  require_horizon(horizon);
  const auto la = s.log_abs(horizon + 1);
  SzegoEstimate e{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t n = horizon / 2; n <= horizon; ++n) {
    const double v = root_of_log(la[n], n);
    e.liminf_hat = std::min(e.liminf_hat, v);
    e.limsup_hat = std::max(e.limsup_hat, v);
  }
  return e;
}

double gauge_envelope(double G, double T) {
  if (!(G > 0.0 && G <= 1.0)) throw DomainError("gauge_envelope: G must lie in (0, 1]");
  if (!(T > 1.0 / G)) throw DomainError("gauge_envelope: T must exceed 1/G");
  return std::max(0.0, 1.0 - std::log(1.0 / G) / std::log(T));
}

double infinite_gap_diagnostic(const CoefficientStream& s, std::size_t horizon, double gamma) {
  return L_estimate(s, gamma, horizon);
}

ZeroOneProfile zero_one_profile(const CoefficientStream& s, std::size_t n) {
  if (n == 0) throw DomainError("zero_one_profile: n must be positive");
  const auto c = s.coefficients(n + 1);
  ZeroOneProfile p;
  p.n = n;
  bool any = false;
  for (std::size_t k = 0; k <= n; ++k) {
    if (c[k] == Complex{1.0, 0.0}) {
      p.m_n = k;
      any = true;
    } else if (c[k] != Complex{0.0, 0.0}) {
      throw DomainError("zero_one_profile: coefficient is neither 0 nor 1");
    }
  }
  if (!any || c[0] != Complex{1.0, 0.0}) throw DomainError("zero_one_profile: requires a_0 = 1");
  p.ratio = static_cast<double>(p.m_n) / static_cast<double>(n);
  return p;
}

}  // namespace zsect
