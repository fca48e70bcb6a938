#pragma once

#include <cmath>
#include <complex>

#include <json.hpp>

namespace zsect {

/// Finite doubles as numbers; inf/-inf/nan as the strings "inf", "-inf", "nan".
inline nlohmann::json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    if (s == "nan") return std::nan("");
    return std::stod(s);
  }
  return j.get<double>();
}

inline nlohmann::json json_complex(std::complex<double> z) {
  return nlohmann::json::array({json_number(z.real()), json_number(z.imag())});
}

}  // namespace zsect
