#include "zero_atlas/potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace zero_atlas {

namespace {

// Q(m) = inf { s : I'_+(s) >= m }
double mass_quantile(const RadialProfile& p, double m) {
  const double log_r0 = p.log_r0();
  auto reaches = [&](double s) { return conjugate_right_derivative(p, s) >= m; };
  double hi = std::isfinite(log_r0) ? std::min(0.0, log_r0 - 1.0) : 0.0;
  double step = 1.0;
  for (int it = 0; !reaches(hi); ++it) {
    if (it > 2000) throw NumericalError("potential: mass level not reached below R0");
    if (std::isfinite(log_r0)) {
      hi = 0.5 * (hi + log_r0);
    } else {
      hi += step;
      step *= 2.0;
    }
  }
  double lo = hi - 1.0;
  step = 1.0;
  while (reaches(lo)) {
    step *= 2.0;
    lo = hi - step;
    if (lo < -1e4) return lo;
  }
  while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (reaches(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 300 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TruncatedLaw::TruncatedLaw(const RadialProfile& base, double kappa)
    : base_(base.convexified()), kappa_(kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa) || kappa > base_.t0()) {
    throw ConfigError("truncated law: kappa must lie in (0, T0]");
  }
  u_prime_0_ = base_.du_right(0.0);
  u_prime_kappa_ = base_.du_left(kappa);
}

double equilibrium_potential(const TruncatedLaw& tl, std::complex<double> z) {
  const RadialProfile& p = tl.base();
  const double k = tl.kappa();
  const double r = std::abs(z);
  const double s = r > 0.0 ? std::log(r) : kNegInf;
  if (s <= tl.u_prime_0()) return -(p.u(k) - p.u(0.0));
  if (s >= tl.u_prime_kappa()) return -k * s;
  return -(conjugate_at(p, s) + p.u(k));
}

double potential_quadrature(const TruncatedLaw& tl, std::complex<double> z, double tol) {
  const RadialProfile& p = tl.base();
  const double kappa = tl.kappa();
  const double r = std::abs(z);
  const double s_z = r > 0.0 ? std::log(r) : kNegInf;

  // below m_star the integrand is the constant -s_z
  double m_star = 0.0;
  if (std::isfinite(s_z) && s_z > tl.u_prime_0()) {
    m_star = s_z >= tl.u_prime_kappa() ? kappa : std::min(kappa, conjugate_left_derivative(p, s_z));
  }
  double total = std::isfinite(s_z) ? -s_z * m_star : 0.0;
  if (m_star >= kappa) return total;

  std::vector<double> breaks{m_star};
  if (p.is_piecewise_linear()) {
    for (double t : p.grid_t()) {
      if (t > m_star && t < kappa) breaks.push_back(t);
    }
  }
  breaks.push_back(kappa);
  std::sort(breaks.begin(), breaks.end());

  boost::math::quadrature::tanh_sinh<double> integrator;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(b > a)) continue;
    auto f = [&](double m) {
      const double q = mass_quantile(p, std::max(m, 1e-300));
      return -std::max(q, s_z);
    };
    double err = 0.0;
    const double piece = integrator.integrate(f, a, b, std::sqrt(tol), &err);
    if (!std::isfinite(piece)) throw NumericalError("potential_quadrature: integral did not converge");
    total += piece;
  }
  return total;
}

double energy(std::span<const std::complex<double>> points, std::span<const double> weights,
              const std::function<double(std::complex<double>)>& external_field) {
  if (points.size() != weights.size()) throw ConfigError("energy: points/weights size mismatch");
  CompensatedSum interaction;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = std::abs(points[i] - points[j]);
      if (d == 0.0) throw ConfigError("energy: coincident points");
      interaction.add(weights[i] * weights[j] * -std::log(d));
    }
  }
  CompensatedSum field;
  for (std::size_t i = 0; i < points.size(); ++i) field.add(weights[i] * external_field(points[i]));
  return interaction.value() + field.value();
}

double energy(std::span<const std::complex<double>> points, std::span<const double> weights,
              const RadialProfile& profile) {
  const RadialProfile p = profile.convexified();
  return energy(points, weights, [&](std::complex<double> z) {
    const double r = std::abs(z);
    if (r == 0.0) return -p.u(0.0);
    return conjugate_at(p, std::log(r));
  });
}

FlatnessCertificate flatness_certificate(const TruncatedLaw& tl, std::span<const double> radii) {
  FlatnessCertificate cert;
  const double inner = tl.inner_radius();
  const double outer = tl.outer_radius();
  CompensatedSum inside_sum;
  long inside = 0;
  for (double r : radii) {
    if (!(r > 0.0)) throw ConfigError("flatness: probe radii must be positive");
    const double F = potential_quadrature(tl, r) + conjugate_at(tl.base(), std::log(r));
    const bool in_support = r >= inner && r <= outer;
    cert.probes.push_back({r, F, in_support});
    if (in_support) {
      inside_sum.add(F);
      ++inside;
    }
  }
  if (inside == 0) throw ConfigError("flatness: no probe on the support annulus");
  cert.constant = inside_sum.value() / static_cast<double>(inside);
  cert.min_excess = kInf;
  for (const FlatnessProbe& pr : cert.probes) {
    if (pr.in_support) {
      cert.max_deviation = std::max(cert.max_deviation, std::abs(pr.F - cert.constant));
    } else {
      cert.min_excess = std::min(cert.min_excess, pr.F - cert.constant);
    }
  }
  if (cert.min_excess == kInf) cert.min_excess = 0.0;
  return cert;
}

std::string_view to_string(OrthogonalWeight w) {
  switch (w) {
    case OrthogonalWeight::flat: return "flat";
    case OrthogonalWeight::elliptic: return "elliptic";
    case OrthogonalWeight::hyperbolic: return "hyperbolic";
  }
  return "flat";
}

double log_moment(OrthogonalWeight w, long n, long k) {
  if (k < 0) throw ConfigError("log_moment: k must be >= 0");
  if (w == OrthogonalWeight::hyperbolic ? n < 3 : n < 1) {
    throw ConfigError("log_moment: n too small for the weight");
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  // integrand in x = log r: log(2 pi r^2 m_n(r) r^{2k})
  auto h = [&](double x) {
    const double e2 = std::exp(2.0 * x);
    double log_density = 0.0;
    switch (w) {
      case OrthogonalWeight::flat: log_density = std::log(nd / kPi) - nd * e2; break;
      case OrthogonalWeight::elliptic:
        log_density = std::log((nd + 1.0) / kPi) - (nd + 2.0) * std::log1p(e2);
        break;
      case OrthogonalWeight::hyperbolic:
        if (e2 >= 1.0) return kNegInf;
        log_density = std::log((nd - 1.0) / kPi) + (nd - 2.0) * std::log1p(-e2);
        break;
    }
    return std::log(kTwoPi) + log_density + (2.0 * kd + 2.0) * x;
  };
  const double x_hi = w == OrthogonalWeight::hyperbolic ? -1e-15 : 30.0;
  const double x_star = golden_max(h, -200.0, x_hi);
  const double h_star = h(x_star);
  double left = 1.0;
  while (h(x_star - left) > h_star - 80.0 && left < 400.0) left *= 2.0;
  double right = 1.0;
  while (x_star + right < x_hi && h(x_star + right) > h_star - 80.0) right *= 2.0;
  const double a = x_star - left;
  const double b = std::min(x_star + right, x_hi);
  auto f = [&](double x) {
    const double v = h(x) - h_star;
    return v == kNegInf ? 0.0 : std::exp(v);
  };
  double err = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13, &err);
  if (!(integral > 0.0)) throw NumericalError("log_moment: quadrature failed");
  return h_star + std::log(integral);
}

double normalized_log_coefficient(OrthogonalWeight w, long n, long k) {
  return log_moment(w, n, k) / (2.0 * static_cast<double>(n));
}

double varadhan_u(OrthogonalWeight w, double t) {
  if (!(t > 0.0)) throw ConfigError("varadhan_u: t must be positive");
  if (w == OrthogonalWeight::elliptic && !(t < 1.0)) {
    throw ConfigError("varadhan_u: elliptic field needs t < 1");
  }
  auto field = [w](double s) {
    const double e2 = std::exp(2.0 * s);
    switch (w) {
      case OrthogonalWeight::flat: return 0.5 * e2;
      case OrthogonalWeight::elliptic: return 0.5 * std::log1p(e2);
      case OrthogonalWeight::hyperbolic: return e2 >= 1.0 ? kInf : -0.5 * std::log1p(-e2);
    }
    return kInf;
  };
  auto objective = [&](double s) { return t * s - field(s); };
  const double s_hi = w == OrthogonalWeight::hyperbolic ? -1e-15 : 40.0;
  const double s_star = golden_max(objective, -200.0, s_hi);
  return objective(s_star);
}

RadialProfile weight_profile(OrthogonalWeight w) {
  switch (w) {
    case OrthogonalWeight::flat: return RadialProfile::named(ProfileKind::flat, 0.5, 0.0);
    case OrthogonalWeight::elliptic: return RadialProfile::named(ProfileKind::elliptic, 0.5);
    case OrthogonalWeight::hyperbolic: return RadialProfile::named(ProfileKind::hyperbolic, 0.5);
  }
  throw ConfigError("weight_profile: unknown weight");
}

}  // namespace zero_atlas
