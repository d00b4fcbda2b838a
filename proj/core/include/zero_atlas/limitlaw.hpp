#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "zero_atlas/conjugate.hpp"

namespace zero_atlas {

struct Atom {
  double radius;
  double mass;
};

/// Annulus {r_lo < |z| < r_hi} carrying no limit mass; r_lo may be 0 and
/// r_hi may be +inf.
struct Gap {
  double r_lo;
  double r_hi;
};

struct LimitOptions {
  double h = 1e-3;
  /// The structural grid covers s in [log(window) - s_span, log(window)].
  double s_span = 8.0;
};

/// Rotationally invariant limit of the empirical zero measures:
/// mu(D_r) = I'(log r).
class LimitMeasure {
 public:
  /// window_radius must be below R0.
  LimitMeasure(const RadialProfile& profile, double window_radius, const LimitOptions& options = {});

  const RadialProfile& profile() const { return cp_.profile; }
  const ConjugateProfile& conjugate_profile() const { return cp_; }
  double window() const { return window_; }

  /// mu(open disk of radius r); 0 for r <= 0. Throws for r >= R0.
  double radial_cdf(double r) const;
  /// mu(closed disk of radius r).
  double radial_cdf_closed(double r) const;
  /// Mass of the closed window disk.
  double window_mass() const { return window_mass_; }
  /// radial_cdf(r) / window_mass() clamped to [0, 1] for r <= window.
  double normalized_cdf(double r) const;

  /// I(log r).
  double log_potential(double r) const;

  /// I''(log|z|) / (2 pi |z|^2). Throws for z = 0 or |z| within 4 h of an atom.
  double density(std::complex<double> z) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  /// Atoms with masses divided by window_mass(), restricted to the window.
  std::vector<Atom> normalized_atoms() const;
  const std::vector<Gap>& gaps() const { return gaps_; }

  /// [e^{u'(0+)}, e^{u'(T0-)}].
  double support_inner() const;
  double support_outer() const;

  /// Quantile of |Z| under the window-normalized law, by bisection on I'.
  double radial_quantile(double p) const;

  /// m i.i.d. draws from the window-normalized law: radius e^{u'_-(U M)},
  /// angle uniform. Deterministic in (seed, m).
  std::vector<std::complex<double>> sample(std::size_t m, std::uint64_t seed) const;

 private:
  ConjugateProfile cp_;
  double window_;
  double window_mass_;
  double h_;
  std::vector<Atom> atoms_;
  std::vector<Gap> gaps_;
};

}  // namespace zero_atlas
