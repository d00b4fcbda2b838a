#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "zero_atlas/conjugate.hpp"

namespace zero_atlas {

/// Limit law mu^(kappa) of the series cut at degree kappa*n: total mass
/// kappa, support in [e^{u'(0+)}, e^{u'(kappa-)}].
class TruncatedLaw {
 public:
  /// Non-convex profiles are replaced by their hull. Throws ConfigError
  /// unless 0 < kappa <= T0 and kappa is finite.
  TruncatedLaw(const RadialProfile& base, double kappa);

  const RadialProfile& base() const { return base_; }
  double kappa() const { return kappa_; }
  double u_prime_0() const { return u_prime_0_; }
  double u_prime_kappa() const { return u_prime_kappa_; }
  double inner_radius() const { return std::exp(u_prime_0_); }
  double outer_radius() const { return std::exp(u_prime_kappa_); }
  double total_mass() const { return kappa_; }

 private:
  RadialProfile base_;
  double kappa_;
  double u_prime_0_;
  double u_prime_kappa_;
};

/// Three-branch closed form of U(z) = int log(1/|z-w|) dmu^(kappa)(w).
double equilibrium_potential(const TruncatedLaw& tl, std::complex<double> z);

/// U(z) = -int_0^kappa max(Q(m), log|z|) dm with Q the generalized inverse of
/// I', found by bisection on the conjugate engine and integrated with
/// tanh-sinh quadrature split at the kinks and jumps of the integrand.
double potential_quadrature(const TruncatedLaw& tl, std::complex<double> z, double tol = 1e-10);

/// J = 1/2 sum_{i != j} w_i w_j log(1/|z_i - z_j|) + sum_i w_i V(z_i).
/// Throws ConfigError on coincident points or mismatched sizes.
double energy(std::span<const std::complex<double>> points, std::span<const double> weights,
              const std::function<double(std::complex<double>)>& external_field);

/// Same with V(z) = I(log|z|) of the profile.
double energy(std::span<const std::complex<double>> points, std::span<const double> weights,
              const RadialProfile& profile);

struct FlatnessProbe {
  double r;
  double F;  // U(r) + I(log r)
  bool in_support;
};

struct FlatnessCertificate {
  std::vector<FlatnessProbe> probes;
  double constant = 0.0;       // mean of F over support probes
  double max_deviation = 0.0;  // max |F - constant| over support probes
  double min_excess = 0.0;     // min (F - constant) over outside probes
  bool passes(double tol) const { return max_deviation <= tol && min_excess >= -tol; }
};

/// F(z) = U(z) + I(log|z|) from the quadrature potential at each radius.
/// The support annulus is closed, so a circle support counts its own radius.
FlatnessCertificate flatness_certificate(const TruncatedLaw& tl, std::span<const double> radii);

/// Rotation-invariant weights m_n(z) of the orthogonal-polynomial rows.
enum class OrthogonalWeight { flat, elliptic, hyperbolic };

std::string_view to_string(OrthogonalWeight w);

/// log int |z|^{2k} m_n(z) d^2z by peak-centred adaptive quadrature.
double log_moment(OrthogonalWeight w, long n, long k);

/// -(1/n) log f_{k,n} with f_{k,n} = (int |z|^{2k} dm_n)^{-1/2}.
double normalized_log_coefficient(OrthogonalWeight w, long n, long k);

/// sup_s (t s - Q(e^s)) for the weight's field Q, by golden-section search.
double varadhan_u(OrthogonalWeight w, double t);

/// Named profile with the same u (alpha = 1/2 ensembles).
RadialProfile weight_profile(OrthogonalWeight w);

}  // namespace zero_atlas
