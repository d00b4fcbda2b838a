#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using mp_complex = boost::multiprecision::cpp_complex<256>;
using mp_real = mp_complex::value_type;

inline constexpr double pi = 3.14159265358979323846;

// Conjugates sup_t (s t - u(t)) solved by hand for each profile.
inline double kac_conjugate(double s) { return std::max(0.0, s); }

inline double elliptic_conjugate(double alpha, double s) {
  return alpha * std::log1p(std::exp(s / alpha));
}

inline double flat_conjugate(double alpha, double beta, double s) {
  return alpha * std::exp((s - beta) / alpha);
}

inline double hyperbolic_conjugate(double alpha, double s) {
  return -alpha * std::log1p(-std::exp(s / alpha));
}

// u(t) = t^2
inline double theta2_conjugate(double s) { return s > 0.0 ? 0.25 * s * s : 0.0; }

// u = t log t / 2 - t / 2 + beta t on [0, 1]
inline double weyl_conjugate(double beta, double s) {
  if (s <= beta) return 0.5 * std::exp(2.0 * (s - beta));
  return s - beta + 0.5;
}

inline double three_circles_conjugate(double s) {
  return std::max({0.0, s, 2.0 * s - std::log(2.0), 3.0 * s - std::log(6.0)});
}

// Polynomial sum c_k z^k evaluated in 256-bit arithmetic.
inline mp_complex mp_eval(std::span<const cplx> c, const mp_complex& z) {
  mp_complex acc(0);
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = acc * z + mp_complex(mp_real(c[k].real()), mp_real(c[k].imag()));
  }
  return acc;
}

inline double mp_abs_log(std::span<const cplx> c, cplx z) {
  const mp_complex v = mp_eval(c, mp_complex(mp_real(z.real()), mp_real(z.imag())));
  return static_cast<double>(log(abs(v)));
}

// mu(D_r) = int_0^r 2 pi x rho(x) dx
inline double radial_mass(const std::function<double(double)>& rho, double r) {
  auto f = [&](double x) { return 2.0 * pi * x * rho(x); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, r, 15, 1e-13);
}

// Distance from z to the curve |z e^{1-z}| = 1, |z| <= 1, by dense sampling
// of the curve parametrized by r in [r_min, 1].
inline double szego_distance(cplx z) {
  // r e^{1 - r cos t} = 1  <=>  cos t = (1 + log r) / r
  double lo = 0.2, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((1.0 + std::log(mid)) / mid < -1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r_start = hi;
  double best = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 200000;
  for (int i = 0; i <= kSamples; ++i) {
    const double r = r_start + (1.0 - r_start) * i / kSamples;
    const double c = std::clamp((1.0 + std::log(r)) / r, -1.0, 1.0);
    const double t = std::acos(c);
    best = std::min({best, std::abs(z - std::polar(r, t)), std::abs(z - std::polar(r, -t))});
  }
  return best;
}

}  // namespace oracle
