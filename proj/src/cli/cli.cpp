#include "zsect/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zsect/bounds.hpp"
#include "zsect/ensembles.hpp"
#include "zsect/gauge.hpp"
#include "zsect/json_util.hpp"
#include "zsect/measures.hpp"
#include "zsect/roots.hpp"
#include "zsect/series.hpp"
#include "zsect/universal.hpp"

namespace zsect {

namespace {

using json = nlohmann::json;

struct Options {
  std::string family = "geometric";
  std::string ensemble = "gaussian_complex";
  std::string t_grid;
  std::string grid;
  std::string targets;
  std::string out;
  std::string format;
  std::string raw;
  std::string coeffs;
  std::size_t n = 16;
  std::size_t horizon = 4096;
  std::size_t trials = 100;
  std::size_t steps = 1;
  std::size_t workers = 0;
  std::size_t m_max = 4;
  std::uint64_t seed = 1;
  double tol = kDefaultRootTol;
  double symmetry_t = 0.0;
  bool audit = false;
  bool compactified = false;
};

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf") {
      out.push_back(HUGE_VAL);
      continue;
    }
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("invalid number in list: '" + item + "'");
    }
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

Complex snap(Complex w) {
  const double s = 1e-12 * std::max(1.0, std::abs(w));
  return {std::abs(w.real()) <= s ? 0.0 : w.real(), std::abs(w.imag()) <= s ? 0.0 : w.imag()};
}

json envelope(const std::string& command, json config, json result) {
  return {{"tool", "zsect"}, {"version", kToolVersion}, {"timestamp", timestamp()},
          {"command", command}, {"config", std::move(config)}, {"result", std::move(result)}};
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty() || o.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + o.out + "'");
  f << text;
  if (!f) throw DomainError("write failed for '" + o.out + "'");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << text;
}

std::string format_or(const Options& o, const char* fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "json" && f != "csv") throw DomainError("format must be json or csv");
  return f;
}

int cmd_zeros(const Options& o, std::ostream& out) {
  const CoefficientStream s = CoefficientStream::parse(o.family);
  const Polynomial p = section(s, o.n);
  const ZeroSet z = find_zeros(p, o.tol);

  std::size_t origin = 0;
  std::vector<Complex> rest;
  for (const auto& w : z.finite_zeros) {
    if (w == Complex{0.0, 0.0}) ++origin;
    else rest.push_back(snap(w));
  }
  std::sort(rest.begin(), rest.end(), [](Complex a, Complex b) {
    const double aa = std::arg(a), ab = std::arg(b);
    if (aa != ab) return aa > ab;
    return std::abs(a) < std::abs(b);
  });

  if (format_or(o, "csv") == "json") {
    json zeros = json::array();
    for (const auto& w : rest) zeros.push_back(json_complex(w));
    const json result = {{"zeros", zeros}, {"origin_multiplicity", origin},
                         {"infinity_count", z.infinity_count}, {"formal_degree", z.formal_degree}};
    const json config = {{"family", s.to_json()}, {"n", o.n}, {"tol", o.tol}};
    emit(o, envelope("zeros", config, result).dump(2) + "\n", out);
    return 0;
  }
  std::ostringstream csv;
  csv << "re,im,multiplicity\n";
  for (const auto& w : rest) csv << fmt(w.real()) << ',' << fmt(w.imag()) << ",1\n";
  if (origin > 0) csv << "0,0," << origin << '\n';
  csv << "inf,inf," << z.infinity_count << '\n';
  emit(o, csv.str(), out);
  return 0;
}

int cmd_measure(const Options& o, std::ostream& out) {
  const CoefficientStream s = CoefficientStream::parse(o.family);
  const Polynomial p = section(s, o.n);
  const ZeroSet z = find_zeros(p, o.tol);
  const RadialMeasure rho = radial_projection(z);
  const auto grid = parse_list(o.t_grid.empty() ? "0.5,0.9,0.99,1,1.01,1.1,1.2,2" : o.t_grid);

  if (format_or(o, "csv") == "json") {
    json cdf = json::array();
    for (double t : grid) cdf.push_back({{"t", json_number(t)}, {"x", compactify(t)}, {"F", counting_fn(z, t)}});
    json weyl = json::array();
    for (std::size_t m = 1; m <= o.m_max; ++m) {
      const Complex w = weyl_sum(z, m);
      weyl.push_back({{"m", m}, {"re", w.real()}, {"im", w.imag()}, {"abs", std::abs(w)}});
    }
    const json result = {{"cdf", cdf},
                         {"weyl", weyl},
                         {"mass_at_infinity", rho.mass_at_infinity()},
                         {"levy_distance_to_unit_circle", levy_distance(rho, RadialMeasure::dirac(1.0))}};
    const json config = {{"family", s.to_json()}, {"n", o.n}, {"t_grid", grid}, {"m_max", o.m_max}, {"compactified", o.compactified}};
    emit(o, envelope("measure", config, result).dump(2) + "\n", out);
    return 0;
  }
  std::ostringstream csv;
  csv << (o.compactified ? "x,F\n" : "t,F\n");
  for (double t : grid) csv << fmt(o.compactified ? compactify(t) : t) << ',' << fmt(counting_fn(z, t)) << '\n';
  csv << "\nm,weyl_re,weyl_im,weyl_abs\n";
  for (std::size_t m = 1; m <= o.m_max; ++m) {
    const Complex w = weyl_sum(z, m);
    csv << m << ',' << fmt(w.real()) << ',' << fmt(w.imag()) << ',' << fmt(std::abs(w)) << '\n';
  }
  emit(o, csv.str(), out);
  return 0;
}

json bounds_audit(const Polynomial& p, const BoundsReport& r, bool& ok) {
  const ZeroSet z = find_zeros(p);
  const std::size_t n = p.formal_degree();
  json a;
  double outer = 0.0;
  for (const auto& w : z.finite_zeros) outer = std::max(outer, std::abs(w) / r.cauchy);
  a["max_modulus_over_cauchy"] = json_number(outer);
  ok = ok && outer <= 1.0 + 1e-9;

  // Inner Cauchy bound of the origin-deflated polynomial.
  const std::size_t origin = p.origin_multiplicity();
  const std::vector<Complex> core(p.coeffs().begin() + long(origin), p.coeffs().end());
  const Polynomial deflated(core);
  if (deflated.degree() >= 1) {
    const double c = inner_cauchy_bound(deflated);
    double inner = HUGE_VAL;
    for (const auto& w : z.finite_zeros)
      if (w != Complex{0.0, 0.0}) inner = std::min(inner, std::abs(w) / c);
    a["inner_cauchy_deflated"] = c;
    a["min_modulus_over_inner_cauchy"] = json_number(inner);
    ok = ok && inner >= 1.0 - 1e-9;
  }

  const auto moduli = sorted_moduli(z);
  json vv = json::object(), ivv = json::object();
  for (std::size_t m = 1; m <= n; ++m) {
    const double V = r.van_vleck.at(m);
    const auto inside = std::size_t(std::count_if(moduli.begin(), moduli.end(), [&](double x) { return x <= V * (1 + 1e-9); }));
    vv[std::to_string(m)] = {{"bound", json_number(V)}, {"zeros_inside", inside}};
    ok = ok && inside >= m;
    if (r.inner_van_vleck.count(m)) {
      const InnerVanVleck iv = inner_van_vleck_bound(p, m);
      const auto outside = std::size_t(std::count_if(moduli.begin(), moduli.end(), [&](double x) { return x >= iv.value * (1 - 1e-9); }));
      ivv[std::to_string(m)] = {{"bound", json_number(iv.value)}, {"zeros_outside", outside}, {"log_slack", json_number(iv.log_slack)}};
      ok = ok && outside >= m && iv.log_slack >= -1e-9;
    }
  }
  a["van_vleck"] = vv;
  a["inner_van_vleck"] = ivv;

  if (std::abs(p[0]) > kDropTolerance && std::abs(p[n]) > kDropTolerance) {
    const JensenResult j = jensen_identity(p, z);
    a["jensen"] = {{"lhs", j.lhs}, {"rhs", j.rhs}, {"near_unimodular", j.near_unimodular}, {"tolerance", j.tolerance()}};
    json weak = json::array();
    for (double T : {1.1, 2.0, 10.0}) {
      const WeakJensenResult w = weak_jensen_check(p, z, T);
      weak.push_back({{"T", T}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"holds", w.holds()}});
      ok = ok && w.holds();
    }
    a["weak_jensen"] = weak;
    const VieteReport v = viete_checks(p, z);
    a["viete"] = {{"product_relative_error", json_number(v.product_relative_error)}, {"min_log_slack", json_number(v.min_slack())}};
    ok = ok && v.min_slack() >= -1e-9;
  }
  a["ok"] = ok;
  return a;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  const CoefficientStream s = CoefficientStream::parse(o.family);
  const Polynomial p = section(s, o.n);
  const BoundsReport r = bounds_report(p);
  json result = r.to_json();
  bool ok = true;
  if (o.audit) result["audit"] = bounds_audit(p, r, ok);
  const json config = {{"family", s.to_json()}, {"n", o.n}, {"audit", o.audit}};
  emit(o, envelope("bounds", config, result).dump(2) + "\n", out);
  return ok ? 0 : 2;
}

int cmd_gauge(const Options& o, std::ostream& out) {
  const CoefficientStream s = CoefficientStream::parse(o.family);
  const auto grid = o.grid.empty() ? default_gamma_grid() : parse_list(o.grid);
  const GaugeReport r = gauge_and_index(s, grid, o.horizon, o.workers);
  const SzegoEstimate sz = szego_condition(s, o.horizon);
  json result = r.to_json();
  result["szego_liminf_hat"] = sz.liminf_hat;
  result["szego_limsup_hat"] = sz.limsup_hat;
  result["infinite_gap_diagnostic"] = infinite_gap_diagnostic(s, o.horizon);
  const json config = {{"family", s.to_json()}, {"horizon", o.horizon}, {"grid", grid}};
  emit(o, envelope("gauge", config, result).dump(2) + "\n", out);
  return 0;
}

int cmd_random(const Options& o, std::ostream& out) {
  const Ensemble e = Ensemble::parse(o.ensemble);
  const auto grid = parse_list(o.t_grid.empty() ? "0.9,1,1.1" : o.t_grid);
  const MCReport r = mc_phi(e, o.n, grid, o.trials, o.seed, o.workers);
  json result = r.to_json();
  const ConditionFlags f = check_conditions(e);
  result["conditions"] = {{"log_moment", f.log_moment},
                          {"uniformly_non_null", f.uniformly_non_null},
                          {"szego_almost_surely", f.szego_almost_surely},
                          {"conclusion", f.conclusion}};
  if (o.symmetry_t > 0.0) result["symmetry"] = phi_symmetry_check(e, o.n, o.symmetry_t, o.trials, o.seed, o.workers).to_json();
  json config = {{"ensemble", e.name()}, {"n", o.n}, {"trials", o.trials}, {"seed", o.seed}, {"t_grid", grid}};
  if (o.symmetry_t > 0.0) config["symmetry_t"] = o.symmetry_t;

  if (!o.raw.empty()) {
    std::ostringstream csv;
    csv << "trial,ok";
    for (double t : grid) csv << ",F(" << fmt(t) << ')';
    csv << ",weyl1_re,weyl1_im\n";
    for (const auto& rec : r.records) {
      csv << rec.trial << ',' << (rec.ok ? 1 : 0);
      for (std::size_t g = 0; g < grid.size(); ++g) csv << ',' << (rec.ok ? fmt(rec.cdf[g]) : "");
      csv << ',' << fmt(rec.weyl1.real()) << ',' << fmt(rec.weyl1.imag()) << '\n';
    }
    write_file(o.raw, csv.str());
  }
  emit(o, envelope("random", config, result).dump(2) + "\n", out);
  return 0;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_universal(const Options& o, std::ostream& out) {
  std::vector<TargetMeasure> targets;
  if (o.targets.empty()) {
    targets = diagonal_targets(o.steps);
  } else {
    const std::string text = o.targets.find_first_of("{[") == 0 ? o.targets : read_text(o.targets);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw DomainError(std::string("malformed targets: ") + e.what());
    }
    targets = parse_targets(j);
  }
  const UniversalRun run = run_universal(targets, o.steps, o.workers);
  json steps = json::array();
  for (const auto& rec : run.state.history) steps.push_back(rec.to_json());
  json tj = json::array();
  for (const auto& t : targets) tj.push_back(t.to_json());
  const json result = {{"steps", steps}, {"degree", run.state.d}, {"verified", run.verified}};
  const json config = {{"steps", o.steps}, {"targets", tj}};

  if (!o.coeffs.empty()) {
    std::ostringstream csv;
    csv << "k,re,im,log_abs\n";
    for (const auto& t : run.state.P.terms()) {
      const Complex v = t.value();
      csv << t.power << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << ',' << fmt(t.log_abs) << '\n';
    }
    write_file(o.coeffs, csv.str());
  }
  emit(o, envelope("universal", config, result).dump(2) + "\n", out);
  return run.verified ? 0 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeros of sections of power series"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output path (default stdout)");
    sub->add_option("--format", o.format, "json or csv");
    sub->add_option("--workers", o.workers, "Worker threads (0 = ZSECT_WORKERS or hardware)");
  };

  CLI::App* zeros = app.add_subcommand("zeros", "Zeros of a section as CSV (re, im, multiplicity)");
  zeros->add_option("--family", o.family, "Coefficient family descriptor");
  zeros->add_option("--n", o.n, "Section degree");
  zeros->add_option("--tol", o.tol, "Backward-error tolerance");
  add_common(zeros);

  CLI::App* measure = app.add_subcommand("measure", "Distribution function and Weyl sums of a section");
  measure->add_option("--family", o.family, "Coefficient family descriptor");
  measure->add_option("--n", o.n, "Section degree");
  measure->add_option("--t-grid", o.t_grid, "Comma-separated radii");
  measure->add_option("--m-max", o.m_max, "Largest Weyl frequency");
  measure->add_option("--tol", o.tol, "Backward-error tolerance");
  measure->add_flag("--compactified", o.compactified, "Report t/(1+t) instead of t");
  add_common(measure);

  CLI::App* bounds = app.add_subcommand("bounds", "Cauchy and Van Vleck bounds of a section");
  bounds->add_option("--family", o.family, "Coefficient family descriptor");
  bounds->add_option("--n", o.n, "Section degree");
  bounds->add_flag("--audit", o.audit, "Check every bound and inequality against the zeros");
  add_common(bounds);

  CLI::App* gauge = app.add_subcommand("gauge", "Gauge and index estimates");
  gauge->add_option("--family", o.family, "Coefficient family descriptor");
  gauge->add_option("--horizon", o.horizon, "Horizon N (window [N/2, N])");
  gauge->add_option("--grid", o.grid, "Comma-separated gamma grid");
  add_common(gauge);

  CLI::App* random = app.add_subcommand("random", "Monte Carlo expected distribution function");
  random->add_option("--ensemble", o.ensemble, "Ensemble descriptor");
  random->add_option("--n", o.n, "Section degree");
  random->add_option("--trials", o.trials, "Number of trials");
  random->add_option("--seed", o.seed, "Seed");
  random->add_option("--t-grid", o.t_grid, "Comma-separated radii");
  random->add_option("--symmetry", o.symmetry_t, "Also run the paired symmetry check at this t in (0, 1]");
  random->add_option("--raw", o.raw, "Write per-trial CSV to this path");
  add_common(random);

  CLI::App* universal = app.add_subcommand("universal", "Build and audit steps of the universal series");
  universal->add_option("--steps", o.steps, "Number of steps k");
  universal->add_option("--targets", o.targets, "Targets as JSON text or a JSON file path");
  universal->add_option("--coeffs", o.coeffs, "Write the nonzero coefficients as CSV to this path");
  add_common(universal);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (zeros->parsed()) return cmd_zeros(o, out);
    if (measure->parsed()) return cmd_measure(o, out);
    if (bounds->parsed()) return cmd_bounds(o, out);
    if (gauge->parsed()) return cmd_gauge(o, out);
    if (random->parsed()) return cmd_random(o, out);
    if (universal->parsed()) return cmd_universal(o, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NonConvergenceError& e) {
    err << "verification failed: " << e.what() << " (residual " << e.residual() << ")\n";
    return 2;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return 2;
  }
  err << "error: unknown subcommand\n";
  return 1;
}

}  // namespace zsect
