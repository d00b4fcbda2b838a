#include "zero_atlas/limitlaw.hpp"

#include <algorithm>

namespace zero_atlas {

namespace {

ConjugateProfile structure_grid(const RadialProfile& profile, double window_radius,
                                const LimitOptions& options) {
  if (!(window_radius > 0.0) || !std::isfinite(window_radius)) {
    throw ConfigError("limit law: window radius must be positive and finite");
  }
  if (std::log(window_radius) >= profile.log_r0()) {
    throw ConfigError("limit law: window radius must be below R0");
  }
  if (!(options.s_span > 0.0)) throw ConfigError("limit law: s_span must be positive");
  const double s_hi = std::log(window_radius);
  return conjugate(profile, s_hi - options.s_span, s_hi, options.h);
}

}  // namespace

LimitMeasure::LimitMeasure(const RadialProfile& profile, double window_radius,
                           const LimitOptions& options)
    : cp_(structure_grid(profile, window_radius, options)),
      window_(window_radius),
      window_mass_(0.0),
      h_(options.h) {
  const double s_hi = std::log(window_radius);
  window_mass_ = conjugate_right_derivative(cp_.profile, s_hi);
  for (const Jump& j : cp_.jumps) atoms_.push_back({std::exp(j.s), j.size});
  for (const Flat& f : cp_.flats) gaps_.push_back({std::exp(f.s_lo), std::exp(f.s_hi)});
}

double LimitMeasure::radial_cdf(double r) const {
  if (r <= 0.0) return 0.0;
  return conjugate_left_derivative(cp_.profile, std::log(r));
}

double LimitMeasure::radial_cdf_closed(double r) const {
  if (r < 0.0) return 0.0;
  if (r == 0.0) return 0.0;
  return conjugate_right_derivative(cp_.profile, std::log(r));
}

double LimitMeasure::normalized_cdf(double r) const {
  if (!(window_mass_ > 0.0)) throw ConfigError("limit law: window carries no mass");
  if (r >= window_) return 1.0;
  return std::clamp(radial_cdf(r) / window_mass_, 0.0, 1.0);
}

double LimitMeasure::log_potential(double r) const {
  if (!(r > 0.0)) throw ConfigError("limit law: I(log r) needs r > 0");
  return conjugate_at(cp_.profile, std::log(r));
}

double LimitMeasure::density(std::complex<double> z) const {
  const double r = std::abs(z);
  if (r == 0.0) throw ConfigError("density: undefined at z = 0");
  const double s = std::log(r);
  const double hd = h_;
  for (const Jump& j : cp_.jumps) {
    if (std::abs(j.s - s) <= 4.0 * hd) throw ConfigError("density: z lies on an atom circle");
  }
  const RadialProfile& p = cp_.profile;
  auto d1 = [&](double step) {
    double hi = s + step;
    double lo = s - step;
    if (hi >= p.log_r0()) {
      // one-sided near R0
      hi = s;
      lo = s - 2.0 * step;
    }
    return (conjugate_left_derivative(p, hi) - conjugate_left_derivative(p, lo)) / (hi - lo);
  };
  const double coarse = d1(hd);
  const double fine = d1(0.5 * hd);
  const double second = std::max(0.0, (4.0 * fine - coarse) / 3.0);
  return second / (kTwoPi * r * r);
}

std::vector<Atom> LimitMeasure::normalized_atoms() const {
  std::vector<Atom> out;
  if (!(window_mass_ > 0.0)) return out;
  for (const Atom& a : atoms_) {
    if (a.radius <= window_ * (1.0 + 1e-12)) out.push_back({a.radius, a.mass / window_mass_});
  }
  return out;
}

double LimitMeasure::support_inner() const { return std::exp(cp_.profile.du_right(0.0)); }

double LimitMeasure::support_outer() const {
  const RadialProfile& p = cp_.profile;
  if (!p.is_polynomial()) return p.r0();
  return std::exp(p.du_left(p.t0()));
}

double LimitMeasure::radial_quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("radial_quantile: p must lie in [0, 1]");
  if (!(window_mass_ > 0.0)) throw ConfigError("radial_quantile: zero-mass window");
  const RadialProfile& prof = cp_.profile;
  const double target = p * window_mass_;
  double hi = std::log(window_);
  if (p == 0.0) return support_inner();
  double lo = hi - 8.0;
  while (conjugate_right_derivative(prof, lo) >= target) {
    lo -= 8.0;
    if (lo < -745.0) return 0.0;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (conjugate_right_derivative(prof, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::exp(hi);
}

std::vector<std::complex<double>> LimitMeasure::sample(std::size_t m, std::uint64_t seed) const {
  if (!(window_mass_ > 0.0)) throw ConfigError("sample_limit: zero-mass window");
  const RadialProfile& p = cp_.profile;
  std::vector<std::complex<double>> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = counter_uniform(seed, i, 0);
    const double angle = kTwoPi * counter_uniform(seed, i, 1);
    const double r = std::min(window_, std::exp(p.du_left(u * window_mass_)));
    out[i] = std::polar(r, angle);
  }
  return out;
}

}  // namespace zero_atlas
