#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zero_atlas/schedule.hpp"

namespace zero_atlas {

enum class NoiseKind {
  complex_gaussian,
  real_gaussian,
  rademacher,
  cauchy,
  pareto_log,
  uniform_disc,
  deterministic,
};

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);

struct NoiseDistribution {
  NoiseKind kind = NoiseKind::complex_gaussian;
  /// Tail exponent of pareto_log: P[log|xi| > t] = t^{-gamma}, t > 1.
  double gamma = 4.0;

  /// Real-valued kinds put phases exactly at 0 or pi.
  bool is_real() const;
  bool is_continuous() const;
  /// E log(1+|xi|) < inf; false only for pareto_log with gamma <= 1.
  bool log_moment_finite() const;
};

/// Throws ConfigError for gamma <= 0.
NoiseDistribution make_noise(NoiseKind kind, double gamma = 4.0);

struct NoiseDraws {
  std::vector<double> log_mag;
  std::vector<double> phase;
};

/// Draw k is a pure function of (seed, k); `offset` shifts the first index.
NoiseDraws draw_noise(const NoiseDistribution& dist, std::size_t count, std::uint64_t seed,
                      std::size_t offset = 0);

/// Smallest K with sum_{k>K} exp(log_mag(k) + eps k + k log r) < tol, with
/// eps = min(0.05, log(R0/r)/2). Polynomial schedules return their degree.
long truncation_degree(const CoefficientSchedule& schedule, double r, double tol);

/// G(z) = sum_{k<=degree} xi_k f_{k,n} z^k in log-polar form.
struct RandomFunctionInstance {
  CoefficientSchedule schedule;
  NoiseDistribution noise;
  std::uint64_t seed = 0;
  long degree = 0;
  double window = 0.0;
  std::vector<double> noise_log_mag;
  std::vector<double> noise_phase;
  /// log|xi_k f_{k,n}| and arg(xi_k f_{k,n}) for k = 0..degree.
  std::vector<double> log_mag;
  std::vector<double> phase;

  long n() const { return schedule.n(); }
};

/// Polynomial schedules keep their exact degree. Entire schedules are cut at
/// the smallest K whose realized tail at the window radius is below 1e-12 of
/// the realized peak term, scanning up to the truncation_degree horizon.
RandomFunctionInstance instantiate(const CoefficientSchedule& schedule,
                                   const NoiseDistribution& dist, std::uint64_t seed,
                                   double window_radius);

/// Deterministic instance with the given coefficients c_0..c_d.
RandomFunctionInstance instance_from_coefficients(std::span<const std::complex<double>> c,
                                                  long n = 1, double window_radius = 1.0);

/// Deterministic instance from term log-magnitudes and phases.
RandomFunctionInstance instance_from_terms(std::vector<double> log_mag, std::vector<double> phase,
                                           long n, double window_radius);

struct LogValue {
  double log_abs;  // -inf at an exact zero
  double phase;
  std::complex<double> value() const;
};

/// Max-term scaled, compensated evaluation. Terms more than e^{-60} below
/// the peak are skipped. Throws NumericalError if all coefficients vanish.
LogValue evaluate(const RandomFunctionInstance& inst, std::complex<double> z);

/// order-th derivative G^{(order)}(z).
LogValue evaluate_derivative(const RandomFunctionInstance& inst, std::complex<double> z, int order);

/// Instance whose coefficients are those of G^{(order)}.
RandomFunctionInstance derivative(const RandomFunctionInstance& inst, int order = 1);

/// Returns e^{i phase}, exact for phase 0 and pi.
std::complex<double> unit_phase(double phase);

struct InstanceManifest {
  std::string schedule_id;
  std::string profile;  // serialize_profile text, empty for explicit schedules
  long n = 1;
  NoiseKind noise = NoiseKind::complex_gaussian;
  double gamma = 4.0;
  std::uint64_t seed = 0;
  long degree = 0;
  double window = 0.0;
};

InstanceManifest manifest_of(const RandomFunctionInstance& inst);
std::string serialize_manifest(const InstanceManifest& manifest);
InstanceManifest parse_manifest(const std::string& text);
/// Rebuilds the instance; throws ConfigError for explicit schedules or if the
/// replayed degree differs.
RandomFunctionInstance replay(const InstanceManifest& manifest);

}  // namespace zero_atlas
