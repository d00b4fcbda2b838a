#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zero_atlas/limitlaw.hpp"
#include "zero_atlas/roots.hpp"

namespace zero_atlas {

/// Right-continuous step function r -> (1/n) #{zeros with |z| <= r}.
class EmpiricalRadialCdf {
 public:
  EmpiricalRadialCdf(const ZeroSet& zs, long n);

  double operator()(double r) const;
  /// (radius where the step occurs, value from that radius on).
  const std::vector<std::pair<double, double>>& plateaus() const { return plateaus_; }
  double terminal() const { return plateaus_.empty() ? 0.0 : plateaus_.back().second; }

 private:
  std::vector<std::pair<double, double>> plateaus_;
};

EmpiricalRadialCdf empirical_radial_cdf(const ZeroSet& zs, long n);

/// Window-normalized KS distance between the zeros in the closed window disk
/// and the limit law, using both one-sided limits of the limit CDF.
double ks_radial(const ZeroSet& zs, const LimitMeasure& lm, double window);

/// Kuiper statistic of the arguments of the zeros against the uniform law
/// (invariant under rotation). Throws ConfigError for fewer than 10 angles.
double ks_angular(const std::vector<double>& angles);
double ks_angular(const ZeroSet& zs);

struct PotentialSample {
  std::complex<double> z;  // point actually used (after jitter)
  double p_n;
  double target;
  double gap;
};

/// p_n = (1/n) log|G_n(z)| against I(log|z|); jitters z when it hits a zero.
PotentialSample potential_at(const RandomFunctionInstance& inst, const RadialProfile& profile,
                             std::complex<double> z);

/// 8 radii x 3 angles inside the window, avoiding atom circles.
std::vector<std::complex<double>> default_probes(const LimitMeasure& lm);

struct CompareConfig {
  RadialProfile profile = RadialProfile::named(ProfileKind::kac);
  long n = 100;
  NoiseDistribution noise;
  long trials = 20;
  double window = 1.0;
  std::uint64_t base_seed = 1729;
  std::vector<std::complex<double>> probes;
  int threads = 1;
  /// Compare zeros of G_n^{(derivative_order)} instead of G_n.
  int derivative_order = 0;
  /// Keep each trial's ZeroSet in the report.
  bool keep_zeros = false;
};

struct TrialResult {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double ks_radial = 0.0;
  double ks_angular = 0.0;
  long count = 0;   // zeros in the closed window disk
  long degree = 0;
  std::vector<double> p_n;  // one per probe
  std::optional<ZeroSet> zeros;
};

struct PotentialCheck {
  std::complex<double> z;
  double p_n_mean;
  double target;
  double gap;
};

struct ComparisonReport {
  std::string ensemble;
  std::string noise;
  long n = 0;
  long trials = 0;
  double window = 0.0;
  std::uint64_t base_seed = 0;
  std::vector<TrialResult> per_trial;
  double mean_ks_radial = 0.0;
  double mean_ks_angular = 0.0;
  double max_ks_radial = 0.0;
  double max_ks_angular = 0.0;
  std::vector<PotentialCheck> potential;

  long failed_trials() const;
};

/// seed_i = base_seed XOR i; trials run on `threads` workers, aggregation in
/// trial order. Failed trials carry their error and are excluded from means.
ComparisonReport compare_report(const CompareConfig& config);

}  // namespace zero_atlas
