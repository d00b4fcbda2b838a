#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "zero_atlas/potential.hpp"

using namespace zero_atlas;

namespace {

// Newton's theorem for a radial density on [0, R]:
// U(r) = -int_0^R log(max(r, rho)) 2 pi rho dens(rho) drho
double radial_potential(const std::function<double(double)>& dens, double R, double r) {
  auto f = [&](double rho) { return -std::log(std::max(r, rho)) * 2.0 * oracle::pi * rho * dens(rho); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (r > 0.0 && r < R) return GK::integrate(f, 0.0, r, 15, 1e-13) + GK::integrate(f, r, R, 15, 1e-13);
  return GK::integrate(f, 0.0, R, 15, 1e-13);
}

// uniform disk of radius R against the field of the Weyl law
double disk_energy(double R) {
  const double interaction = 0.5 * (0.25 - std::log(R));
  const double field = R <= 1.0 ? 0.25 * R * R : 0.25 / (R * R) + std::log(R);
  return interaction + field;
}

std::vector<std::complex<double>> sunflower(double R, int N) {
  const double golden = oracle::pi * (3.0 - std::sqrt(5.0));
  std::vector<std::complex<double>> pts;
  for (int j = 0; j < N; ++j) pts.push_back(std::polar(R * std::sqrt((j + 0.5) / N), golden * j));
  return pts;
}

}  // namespace

TEST_CASE("truncated law preconditions and support") {
  const RadialProfile weyl = RadialProfile::named(ProfileKind::lo_poly, 0.5);
  CHECK_THROWS_AS(TruncatedLaw(weyl, 0.0), ConfigError);
  CHECK_THROWS_AS(TruncatedLaw(weyl, 1.5), ConfigError);
  const TruncatedLaw tl(weyl, 1.0);
  CHECK(tl.inner_radius() == 0.0);
  CHECK(tl.outer_radius() == doctest::Approx(1.0));
  const TruncatedLaw half(RadialProfile::named(ProfileKind::flat, 0.5), 0.25);
  CHECK(half.outer_radius() == doctest::Approx(0.5));
  CHECK(half.total_mass() == 0.25);
}

TEST_CASE("Weyl potential is the uniform-disk potential") {
  const TruncatedLaw tl(RadialProfile::named(ProfileKind::lo_poly, 0.5), 1.0);
  for (double r : {0.0, 0.3, 0.9, 1.0, 1.7, 4.0}) {
    const double disk = r <= 1.0 ? 0.5 * (1.0 - r * r) : -std::log(r);
    CHECK(equilibrium_potential(tl, r) == doctest::Approx(disk).epsilon(1e-12));
    CHECK(std::abs(potential_quadrature(tl, std::polar(r, 1.1)) - disk) <= 1e-8);
  }
}

TEST_CASE("truncated elliptic potential against Newton's theorem") {
  const TruncatedLaw tl(RadialProfile::named(ProfileKind::elliptic, 0.5), 0.5);
  CHECK(tl.outer_radius() == doctest::Approx(1.0));
  const auto dens = [](double rho) { return 1.0 / (oracle::pi * (1.0 + rho * rho) * (1.0 + rho * rho)); };
  for (double r : {0.1, 0.5, 0.99, 1.4, 3.0}) {
    CAPTURE(r);
    const double ref = radial_potential(dens, 1.0, r);
    CHECK(std::abs(equilibrium_potential(tl, r) - ref) <= 1e-9);
    CHECK(std::abs(potential_quadrature(tl, r) - ref) <= 1e-8);
  }
}

TEST_CASE("three circles truncated at two circles") {
  const TruncatedLaw tl(RadialProfile::named(ProfileKind::three_circles), 2.0);
  for (double r : {0.0, 0.5, 1.5, 2.0, 2.5, 6.0}) {
    const double ref = -std::log(std::max(r, 1.0)) - std::log(std::max(r, 2.0));
    CHECK(equilibrium_potential(tl, r) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(std::abs(potential_quadrature(tl, r) - ref) <= 1e-8);
  }
  std::vector<double> radii;
  for (int i = 1; i <= 40; ++i) radii.push_back(0.1 * i);
  const FlatnessCertificate cert = flatness_certificate(tl, radii);
  CHECK(cert.constant == doctest::Approx(-std::log(2.0)));
  CHECK(cert.passes(1e-8));
}

TEST_CASE("Weyl flatness certificate") {
  const TruncatedLaw tl(RadialProfile::named(ProfileKind::lo_poly, 0.5), 1.0);
  std::vector<double> radii;
  for (int i = 1; i <= 30; ++i) radii.push_back(0.05 * i);
  const FlatnessCertificate cert = flatness_certificate(tl, radii);
  CHECK(cert.constant == doctest::Approx(0.5));
  CHECK(cert.max_deviation <= 1e-8);
  CHECK(cert.min_excess >= -1e-8);
  // the field is linear beyond the disk, so F stays equal to the constant
  CHECK(std::abs(cert.probes.back().F - cert.constant) <= 1e-8);
  CHECK_THROWS_AS(flatness_certificate(tl, std::vector<double>{2.0, 3.0}), ConfigError);
}

TEST_CASE("truncated flat law: strict excess outside the support") {
  const TruncatedLaw tl(RadialProfile::named(ProfileKind::flat, 0.5), 0.25);
  std::vector<double> radii;
  for (int i = 1; i <= 20; ++i) radii.push_back(0.05 * i);
  const FlatnessCertificate cert = flatness_certificate(tl, radii);
  // F = -u(1/4) on the disk of radius 1/2, r^2/2 - log(r)/4 beyond
  CHECK(cert.constant == doctest::Approx(-0.5 * (0.25 * std::log(0.25) - 0.25)));
  CHECK(cert.max_deviation <= 1e-8);
  CHECK(cert.probes.back().F == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(cert.min_excess >= -1e-8);
}

TEST_CASE("discrete energies: equilibrium beats uniform competitors") {
  const RadialProfile weyl = RadialProfile::named(ProfileKind::lo_poly, 0.5);
  const int N = 2500;
  const std::vector<double> w(N, 1.0 / N);
  double best = kInf;
  double at_one = 0.0;
  for (double R : {0.8, 1.0, 1.3}) {
    const auto pts = sunflower(R, N);
    const double J = energy(pts, w, weyl);
    CAPTURE(R);
    CHECK(std::abs(J - disk_energy(R)) <= 0.01);
    best = std::min(best, J);
    if (R == 1.0) at_one = J;
  }
  CHECK(at_one == best);
  CHECK(disk_energy(1.0) == doctest::Approx(0.375));
  const std::vector<std::complex<double>> twice{0.5, 0.5};
  CHECK_THROWS_AS(energy(twice, std::vector<double>{0.5, 0.5}, weyl), ConfigError);
  CHECK_THROWS_AS(energy(twice, std::vector<double>{1.0}, weyl), ConfigError);
  // a point at the origin feels I(-inf) = -u(0) = 0
  CHECK(energy(std::vector<std::complex<double>>{0.0}, std::vector<double>{1.0}, weyl) == 0.0);
}

TEST_CASE("orthogonal-polynomial moments are Gamma and Beta integrals") {
  const long n = 50;
  for (long k : {0L, 3L, 20L, 49L}) {
    CAPTURE(k);
    CHECK(log_moment(OrthogonalWeight::flat, n, k) ==
          doctest::Approx(std::lgamma(k + 1.0) - k * std::log(50.0)).epsilon(1e-10));
    CHECK(log_moment(OrthogonalWeight::elliptic, n, k) ==
          doctest::Approx(-(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))).epsilon(1e-10));
    const double beta = std::log(n - 1.0) + std::lgamma(k + 1.0) + std::lgamma(n - 1.0) - std::lgamma(n + k + 0.0);
    CHECK(log_moment(OrthogonalWeight::hyperbolic, n, k) == doctest::Approx(beta).epsilon(1e-10));
  }
  CHECK_THROWS_AS(log_moment(OrthogonalWeight::flat, n, -1), ConfigError);
}

TEST_CASE("normalized coefficients approach the profile") {
  for (OrthogonalWeight w : {OrthogonalWeight::flat, OrthogonalWeight::elliptic, OrthogonalWeight::hyperbolic}) {
    CAPTURE(to_string(w));
    const RadialProfile p = weight_profile(w);
    for (double t : {0.25, 0.5, 0.75}) {
      CHECK(std::abs(normalized_log_coefficient(w, 400, static_cast<long>(t * 400)) - p.u(t)) <= 0.05);
      CHECK(std::abs(varadhan_u(w, t) - p.u(t)) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(varadhan_u(OrthogonalWeight::elliptic, 1.0), ConfigError);
}
