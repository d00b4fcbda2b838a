#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zero_atlas/numeric.hpp"

namespace zero_atlas {

enum class ProfileKind { kac, elliptic, flat, hyperbolic, lo_poly, theta, three_circles, custom };

std::string_view to_string(ProfileKind kind);

/// Accepts the canonical names plus "three-circles" and "weyl" (lo_poly with
/// alpha = 1/2 is selected by the caller).
ProfileKind parse_profile_kind(std::string_view name);

/// Radial coefficient profile: u(t) = -log f(t), finite on [0, T0) and +inf
/// beyond T0, together with the convergence radius R0 of the associated
/// random series.
///
/// Named kinds carry closed forms for u and its one-sided derivatives.
/// Custom profiles are piecewise linear between grid nodes; three_circles is
/// stored the same way since its u is piecewise linear.
class RadialProfile {
 public:
  /// Closed-form profile of a named ensemble.
  /// Throws ConfigError for alpha <= 0, theta with alpha == 1, or kind == custom.
  static RadialProfile named(ProfileKind kind, double alpha = 1.0, double beta = 0.0);

  /// Piecewise-linear profile through (t_i, u_i). t must start at 0 and be
  /// strictly increasing; T0 defaults to the last node.
  static RadialProfile from_samples(std::vector<double> t, std::vector<double> u,
                                    std::optional<double> t0 = std::nullopt);

  ProfileKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double t0() const { return t0_; }
  double r0() const;
  double log_r0() const;

  /// True when the series is a polynomial (T0 finite).
  bool is_polynomial() const { return std::isfinite(t0_); }

  double u(double t) const;
  /// Right derivative of u at t >= 0; +inf for t >= T0 when T0 is finite.
  double du_right(double t) const;
  /// Left derivative of u at t > 0 (at t = 0 returns du_right(0)).
  double du_left(double t) const;

  /// Same profile with T0 lowered to kappa (u^(kappa) = u on [0, kappa]).
  RadialProfile truncated(double kappa) const;

  bool is_piecewise_linear() const { return !grid_t_.empty(); }
  const std::vector<double>& grid_t() const { return grid_t_; }
  const std::vector<double>& grid_u() const { return grid_u_; }

  /// Convexity of u on [0, T0]. Closed forms are convex by construction; grids
  /// are checked on their slopes.
  bool is_convex() const;

  /// Same profile if convex, otherwise the piecewise-linear lower hull of the
  /// grid nodes (the conjugate is unchanged by this replacement).
  RadialProfile convexified() const;

  /// Short identifier such as "flat(alpha=0.5,beta=0)".
  std::string describe() const;

 private:
  RadialProfile() = default;
  double natural_t0() const;
  std::size_t segment_right(double t) const;

  ProfileKind kind_ = ProfileKind::custom;
  double alpha_ = 1.0;
  double beta_ = 0.0;
  double t0_ = kInf;
  std::vector<double> grid_t_;
  std::vector<double> grid_u_;
};

/// Deterministic coefficient magnitudes log|f_{k,n}| for one scale n.
///
/// Entries are cached for k <= k_max; log_mag(k) beyond the cache is computed
/// on demand from the generating profile, or is -inf for explicit schedules.
class CoefficientSchedule {
 public:
  CoefficientSchedule(long n, std::vector<double> log_mag, std::vector<double> phase,
                      std::optional<long> degree_hint,
                      std::optional<RadialProfile> profile = std::nullopt);

  long n() const { return n_; }
  long cached_size() const { return static_cast<long>(log_mag_.size()); }
  std::optional<long> degree_hint() const { return degree_hint_; }
  const std::optional<RadialProfile>& profile() const { return profile_; }

  double log_mag(long k) const;
  double phase(long k) const;
  const std::vector<double>& log_mags() const { return log_mag_; }
  const std::vector<double>& phases() const { return phase_; }

  /// Identifier used in manifests, e.g. "flat(alpha=0.5,beta=0)@n=400".
  std::string id() const;

 private:
  long n_;
  std::vector<double> log_mag_;
  std::vector<double> phase_;
  std::optional<long> degree_hint_;
  std::optional<RadialProfile> profile_;
};

/// Largest index a schedule may materialize.
inline constexpr long kMaxScheduleTerms = 1L << 24;

/// log|f_{k,n}| of a profile, exact log-gamma formulas for named kinds and
/// -n*u(k/n) for custom grids.
double log_coefficient(const RadialProfile& profile, long n, long k);

CoefficientSchedule coefficients(const RadialProfile& profile, long n, long k_max);

/// Schedule from explicit magnitudes log|c_k| and phases arg c_k, k = 0..d.
CoefficientSchedule explicit_schedule(std::span<const double> log_mag,
                                      std::span<const double> phase, long n = 1);

struct MeasureToProfileOptions {
  double r_min = 1e-6;
  /// Outer radius of the reconstruction; defaults to min(R0*(1-1e-9), 1e3).
  std::optional<double> r_max;
  double h = 1e-3;
  std::size_t t_points = 2001;
};

/// Inverts a radial distribution function F(r) = mu(D_r) into a profile:
/// I(s) = int_{-inf}^s F(e^x) dx, u = conjugate of I on [0, F(r_max)].
RadialProfile measure_to_profile(const std::function<double(double)>& radial_cdf, double r0,
                                 const MeasureToProfileOptions& options = {});

/// Key-value text document (kind, alpha, beta, t0, r0, t, u).
std::string serialize_profile(const RadialProfile& profile);
RadialProfile parse_profile(const std::string& text);

}  // namespace zero_atlas
