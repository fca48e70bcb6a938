#include "zsect/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "zsect/json_util.hpp"
#include "zsect/roots.hpp"

namespace zsect {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_prime(std::size_t k) {
  if (k < 2) return false;
  if (k % 2 == 0) return k == 2;
  for (std::size_t d = 3; d * d <= k; d += 2)
    if (k % d == 0) return false;
  return true;
}

bool is_square(std::size_t k) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(k)));
  while (r * r > k) --r;
  while ((r + 1) * (r + 1) <= k) ++r;
  return r * r == k;
}

bool is_power_of(std::size_t k, std::size_t q) {
  if (k == 0) return false;
  while (k % q == 0) k /= q;
  return k == 1;
}

bool is_factorial(std::size_t k) {
  std::size_t f = 1;
  for (std::size_t j = 2; f < k; ++j) f *= j;
  return f == k;
}

nlohmann::json complex_list_json(const std::vector<Complex>& v) {
  auto out = nlohmann::json::array();
  for (const auto& c : v) out.push_back(json_complex(c));
  return out;
}

std::vector<Complex> complex_list_from_json(const nlohmann::json& j) {
  std::vector<Complex> out;
  for (const auto& e : j) {
    if (e.is_array()) out.emplace_back(number_from_json(e.at(0)), number_from_json(e.at(1)));
    else out.emplace_back(number_from_json(e), 0.0);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::size_t parse_size(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw DomainError(std::string("invalid ") + what + ": '" + s + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError(std::string("invalid ") + what + ": '" + s + "'");
  }
}

// Rational series coefficients by the recurrence q_0 a_k = p_k - sum_{j>=1} q_j a_{k-j}.
std::vector<Complex> rational_coefficients(const std::vector<Complex>& num, const std::vector<Complex>& den,
                                           std::size_t count) {
  std::vector<Complex> a(count);
  for (std::size_t k = 0; k < count; ++k) {
    Complex acc = k < num.size() ? num[k] : Complex{0.0, 0.0};
    for (std::size_t j = 1; j < den.size() && j <= k; ++j) acc -= den[j] * a[k - j];
    a[k] = acc / den[0];
  }
  return a;
}

}  // namespace

std::vector<std::size_t> carlson_sequence(double t, std::size_t limit) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("carlson_sequence: t must lie in (0, 1]");
  std::vector<std::size_t> out;
  if (t == 1.0) {
    std::size_t f = 1;
    for (std::size_t k = 1; f <= limit; ++k) {
      out.push_back(f);
      if (f > limit / (k + 1)) break;
      f *= k + 1;
    }
    return out;
  }
  const double ratio = 1.0 / (1.0 - t);
  std::size_t m = 2;
  while (m <= limit) {
    out.push_back(m);
    const double next = std::round(static_cast<double>(m) * ratio);
    if (next >= static_cast<double>(limit) + 1.0) break;
    m = std::max(m + 1, static_cast<std::size_t>(next));
  }
  return out;
}

double carlson_coeff(double t, double g, std::size_t n) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("carlson_coeff: t must lie in (0, 1]");
  if (!(g >= 0.0 && g < 1.0)) throw DomainError("carlson_coeff: g must lie in [0, 1)");
  const auto seq = carlson_sequence(t, n);
  if (std::binary_search(seq.begin(), seq.end(), n)) return 1.0;
  return std::pow(g, static_cast<double>(n));
}

CoefficientStream CoefficientStream::geometric() {
  CoefficientStream s;
  s.family_ = Family::geometric;
  return s;
}

CoefficientStream CoefficientStream::inverse_one_minus_zN(std::size_t period) {
  if (period < 1) throw DomainError("inverse_one_minus_zN: N must be at least 1");
  CoefficientStream s;
  s.family_ = Family::inverse_one_minus_zN;
  s.integer_param_ = period;
  return s;
}

CoefficientStream CoefficientStream::lacunary(std::size_t base) {
  if (base < 2) throw DomainError("lacunary: q must be at least 2");
  CoefficientStream s;
  s.family_ = Family::lacunary;
  s.integer_param_ = base;
  return s;
}

CoefficientStream CoefficientStream::factorial_gaps() {
  CoefficientStream s;
  s.family_ = Family::factorial_gaps;
  return s;
}

CoefficientStream CoefficientStream::rational(std::vector<Complex> numerator, std::vector<Complex> denominator) {
  while (!denominator.empty() && std::abs(denominator.back()) <= kDropTolerance) denominator.pop_back();
  if (denominator.empty()) throw DomainError("rational: zero denominator");
  if (std::abs(denominator.front()) <= kDropTolerance)
    throw DomainError("rational: denominator vanishes at 0");
  if (denominator.size() > 1) {
    const ZeroSet z = find_zeros(Polynomial(denominator));
    for (const auto& w : z.finite_zeros) {
      if (std::abs(std::abs(w) - 1.0) > 1e-6)
        throw DomainError("rational: denominator root off the unit circle");
    }
  }
  CoefficientStream s;
  s.family_ = Family::rational;
  s.list_ = std::move(numerator);
  s.denominator_ = std::move(denominator);
  return s;
}

CoefficientStream CoefficientStream::zero_one(ZeroOneRule rule, std::vector<std::size_t> indices) {
  CoefficientStream s;
  s.family_ = Family::zero_one;
  s.rule_ = rule;
  if (rule == ZeroOneRule::indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    s.indices_ = std::move(indices);
  }
  return s;
}

CoefficientStream CoefficientStream::carlson_lemma(double t, double g) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("carlson_lemma: t must lie in (0, 1]");
  if (!(g >= 0.0 && g < 1.0)) throw DomainError("carlson_lemma: g must lie in [0, 1)");
  CoefficientStream s;
  s.family_ = Family::carlson_lemma;
  s.t_ = t;
  s.g_ = g;
  return s;
}

CoefficientStream CoefficientStream::explicit_list(std::vector<Complex> coeffs) {
  CoefficientStream s;
  s.family_ = Family::explicit_list;
  s.list_ = std::move(coeffs);
  return s;
}

CoefficientStream CoefficientStream::random(const Ensemble& ensemble, std::uint64_t seed) {
  CoefficientStream s;
  s.family_ = Family::random;
  s.ensemble_ = ensemble;
  s.seed_ = seed;
  return s;
}

bool CoefficientStream::is_marked(std::size_t k) const {
  switch (family_) {
    case Family::geometric: return true;
    case Family::inverse_one_minus_zN: return k % integer_param_ == 0;
    case Family::lacunary: return is_power_of(k, integer_param_);
    case Family::factorial_gaps: return k >= 1 && is_factorial(k);
    case Family::zero_one:
      switch (rule_) {
        case ZeroOneRule::squares: return is_square(k);
        case ZeroOneRule::primes: return is_prime(k);
        case ZeroOneRule::indices: return std::binary_search(indices_.begin(), indices_.end(), k);
      }
      return false;
    case Family::carlson_lemma: {
      const auto seq = carlson_sequence(t_, k);
      return std::binary_search(seq.begin(), seq.end(), k);
    }
    default: return false;
  }
}

Complex CoefficientStream::coeff(std::size_t k) const {
  switch (family_) {
    case Family::rational: return rational_coefficients(list_, denominator_, k + 1).back();
    case Family::explicit_list: return k < list_.size() ? list_[k] : Complex{0.0, 0.0};
    case Family::random: return draw(ensemble_, trial_stream(seed_, 0), k);
    case Family::carlson_lemma:
      return is_marked(k) ? Complex{1.0, 0.0} : Complex{std::pow(g_, static_cast<double>(k)), 0.0};
    default: return is_marked(k) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  }
}

std::vector<Complex> CoefficientStream::coefficients(std::size_t count) const {
  if (family_ == Family::rational) return rational_coefficients(list_, denominator_, count);
  std::vector<Complex> out(count, Complex{0.0, 0.0});
  if (family_ == Family::carlson_lemma) {
    for (std::size_t k = 0; k < count; ++k) out[k] = std::pow(g_, static_cast<double>(k));
    if (count > 0)
      for (std::size_t m : carlson_sequence(t_, count - 1)) out[m] = 1.0;
    return out;
  }
  if (family_ == Family::zero_one && rule_ == ZeroOneRule::primes) {
    std::vector<char> composite(count, 0);
    for (std::size_t k = 2; k < count; ++k) {
      if (composite[k]) continue;
      out[k] = 1.0;
      for (std::size_t j = k * k; j < count; j += k) composite[j] = 1;
    }
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) out[k] = coeff(k);
  return out;
}

std::vector<double> CoefficientStream::log_abs(std::size_t count) const {
  std::vector<double> out(count, kNegInf);
  if (family_ == Family::carlson_lemma) {
    const double lg = g_ > 0.0 ? std::log(g_) : kNegInf;
    for (std::size_t k = 0; k < count; ++k) out[k] = k == 0 ? 0.0 : static_cast<double>(k) * lg;
    if (count > 0)
      for (std::size_t m : carlson_sequence(t_, count - 1)) out[m] = 0.0;
    return out;
  }
  if (family_ == Family::random) {
    const std::uint64_t stream = trial_stream(seed_, 0);
    for (std::size_t k = 0; k < count; ++k) out[k] = draw_log_abs(ensemble_, stream, k);
    return out;
  }
  const auto c = coefficients(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = std::abs(c[k]);
    if (a > 0.0) out[k] = std::log(a);
  }
  return out;
}

nlohmann::json CoefficientStream::to_json() const {
  nlohmann::json j;
  switch (family_) {
    case Family::geometric: j["kind"] = "geometric"; break;
    case Family::inverse_one_minus_zN:
      j["kind"] = "inverse_one_minus_zN";
      j["N"] = integer_param_;
      break;
    case Family::lacunary:
      j["kind"] = "lacunary";
      j["q"] = integer_param_;
      break;
    case Family::factorial_gaps: j["kind"] = "factorial_gaps"; break;
    case Family::rational:
      j["kind"] = "rational";
      j["numerator"] = complex_list_json(list_);
      j["denominator"] = complex_list_json(denominator_);
      break;
    case Family::zero_one:
      j["kind"] = "zero_one";
      j["rule"] = rule_ == ZeroOneRule::squares ? "squares" : rule_ == ZeroOneRule::primes ? "primes" : "indices";
      if (rule_ == ZeroOneRule::indices) j["indices"] = indices_;
      break;
    case Family::carlson_lemma:
      j["kind"] = "carlson_lemma";
      j["t"] = t_;
      j["g"] = g_;
      break;
    case Family::explicit_list:
      j["kind"] = "explicit";
      j["coeffs"] = complex_list_json(list_);
      break;
    case Family::random:
      j["kind"] = "random";
      j["ensemble"] = ensemble_.to_json();
      j["seed"] = seed_;
      break;
  }
  return j;
}

CoefficientStream CoefficientStream::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "geometric") return geometric();
    if (kind == "inverse_one_minus_zN") return inverse_one_minus_zN(j.at("N").get<std::size_t>());
    if (kind == "lacunary") return lacunary(j.at("q").get<std::size_t>());
    if (kind == "factorial_gaps") return factorial_gaps();
    if (kind == "rational")
      return rational(complex_list_from_json(j.at("numerator")), complex_list_from_json(j.at("denominator")));
    if (kind == "zero_one") {
      const std::string rule = j.value("rule", "indices");
      if (rule == "squares") return zero_one(ZeroOneRule::squares);
      if (rule == "primes") return zero_one(ZeroOneRule::primes);
      if (rule == "indices") return zero_one(ZeroOneRule::indices, j.at("indices").get<std::vector<std::size_t>>());
      throw DomainError("unknown zero_one rule '" + rule + "'");
    }
    if (kind == "carlson_lemma") return carlson_lemma(j.at("t").get<double>(), j.at("g").get<double>());
    if (kind == "explicit") return explicit_list(complex_list_from_json(j.at("coeffs")));
    if (kind == "random") return random(Ensemble::from_json(j.at("ensemble")), j.value("seed", std::uint64_t{0}));
    throw DomainError("unknown coefficient family '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed stream descriptor: ") + e.what());
  }
}

CoefficientStream CoefficientStream::parse(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("malformed stream descriptor: ") + e.what());
    }
    return from_json(j);
  }
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  const auto args = split(rest, ':');

  if (head == "geometric") return geometric();
  if (head == "factorial_gaps") return factorial_gaps();
  if (head == "inverse_one_minus_zN" && args.size() == 1) return inverse_one_minus_zN(parse_size(args[0], "N"));
  if (head == "lacunary" && args.size() == 1) return lacunary(parse_size(args[0], "q"));
  if ((head == "carlson_lemma" || head == "carlson") && args.size() == 2)
    return carlson_lemma(parse_double(args[0], "t"), parse_double(args[1], "g"));
  if (head == "zero_one" && args.size() == 1) {
    if (args[0] == "squares") return zero_one(ZeroOneRule::squares);
    if (args[0] == "primes") return zero_one(ZeroOneRule::primes);
    std::vector<std::size_t> idx;
    for (const auto& s : split(args[0], ',')) idx.push_back(parse_size(s, "index"));
    return zero_one(ZeroOneRule::indices, std::move(idx));
  }
  if (head == "explicit" && args.size() == 1) {
    std::vector<Complex> c;
    for (const auto& s : split(args[0], ',')) c.emplace_back(parse_double(s, "coefficient"), 0.0);
    return explicit_list(std::move(c));
  }
  if (head == "csv" && !rest.empty()) {
    std::ifstream in(rest);
    if (!in) throw DomainError("cannot open coefficient file '" + rest + "'");
    return explicit_list(read_coefficients_csv(in));
  }
  if (head == "random" && !rest.empty()) {
    // random:<ensemble>[@seed]
    const auto at = rest.rfind('@');
    const std::uint64_t seed = at == std::string::npos ? 0 : parse_size(rest.substr(at + 1), "seed");
    return random(Ensemble::parse(rest.substr(0, at)), seed);
  }
  throw DomainError("unknown coefficient family '" + text + "'");
}

Polynomial section(const CoefficientStream& stream, std::size_t n) {
  return Polynomial(stream.coefficients(n + 1), n);
}

std::vector<Complex> read_coefficients_csv(std::istream& in) {
  std::vector<Complex> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    try {
      std::size_t pos = 0;
      const double re = std::stod(fields.at(0), &pos);
      const double im = fields.size() > 1 ? std::stod(fields[1]) : 0.0;
      out.emplace_back(re, im);
    } catch (const std::exception&) {
      if (lineno == 1 && out.empty()) continue;  // header row
      throw DomainError("malformed coefficient CSV at line " + std::to_string(lineno));
    }
  }
  return out;
}

}  // namespace zsect
