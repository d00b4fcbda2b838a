#include "zero_atlas/numeric.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace zero_atlas {

namespace {

constexpr long kExactFactorialLimit = 32;

const std::array<double, kExactFactorialLimit + 1>& small_log_factorials() {
  static const auto table = [] {
    std::array<double, kExactFactorialLimit + 1> t{};
    t[0] = 0.0;
    for (long k = 1; k <= kExactFactorialLimit; ++k) {
      t[k] = t[k - 1] + std::log(static_cast<double>(k));
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(long k) {
  if (k < 0) throw ConfigError("log_factorial: negative argument");
  if (k <= kExactFactorialLimit) return small_log_factorials()[k];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  if (m == kInf) return kInf;
  CompensatedSum s;
  for (double x : xs) s.add(std::exp(x - m));
  return m + std::log(s.value());
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& text) {
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return kNegInf;
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("trailing characters in number: '" + text + "'");
  return v;
}

}  // namespace zero_atlas
