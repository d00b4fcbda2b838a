#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zero_atlas::cli {

inline constexpr std::uint64_t kDefaultSeed = 1729;

enum ExitCode : int {
  kOk = 0,
  kConfigFailure = 2,
  kNumericalFailure = 3,
  kCheckFailure = 4,
};

struct RunConfig {
  std::string subcommand;
  std::string ensemble = "kac";
  /// Unset: 1/2 for weyl, 2 for theta, 1 otherwise.
  std::optional<double> alpha;
  double beta = 0.0;
  double kappa = 1.0;
  std::string noise = "complex_gaussian";
  double gamma = 4.0;
  long n = 100;
  long trials = 20;
  std::optional<double> window;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "-";
  std::string format;  // empty: subcommand default
  int threads = 1;
  bool check = false;
};

/// Runs one invocation. args excludes the program name. Output goes to the
/// --out file, or to `out` when --out is "-".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zero_atlas::cli
