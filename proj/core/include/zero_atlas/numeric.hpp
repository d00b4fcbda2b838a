#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace zero_atlas {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Invalid parameters or malformed input (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or detected an inconsistent state
/// (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// log(k!) with exact accumulation for k <= 32 and lgamma above.
double log_factorial(long k);

/// t*log(t) with the continuous extension 0*log(0) = 0.
inline double xlogx(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }

/// log(sum exp(x_i)); returns -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> xs);

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform double in the open interval (0, 1), a pure function of
/// (seed, index, lane).
inline double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint32_t lane) {
  const std::uint64_t h =
      mix64(mix64(seed ^ 0xD1B54A32D192ED03ULL) + mix64(index * 4 + lane + 1));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Round-trippable decimal text for a double (17 significant digits,
/// "inf"/"-inf"/"nan" for non-finite values).
std::string format_double(double x);

/// Parses the text produced by format_double.
double parse_double(const std::string& text);

}  // namespace zero_atlas
