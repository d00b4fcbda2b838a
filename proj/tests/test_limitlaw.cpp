#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "zero_atlas/limitlaw.hpp"

using namespace zero_atlas;

TEST_CASE("elliptic and hyperbolic radial laws match integrated densities") {
  const LimitMeasure ell(RadialProfile::named(ProfileKind::elliptic, 0.5), 3.0);
  const auto rho_ell = [](double r) { return 1.0 / (oracle::pi * (1.0 + r * r) * (1.0 + r * r)); };
  for (double r : {0.2, 0.7, 1.0, 1.9, 3.0}) {
    CHECK(std::abs(ell.radial_cdf(r) - oracle::radial_mass(rho_ell, r)) <= 1e-8);
  }
  const LimitMeasure hyp(RadialProfile::named(ProfileKind::hyperbolic, 0.5), 0.9);
  const auto rho_hyp = [](double r) { return 1.0 / (oracle::pi * (1.0 - r * r) * (1.0 - r * r)); };
  for (double r : {0.1, 0.5, 0.8, 0.9}) {
    CHECK(std::abs(hyp.radial_cdf(r) - oracle::radial_mass(rho_hyp, r)) <= 1e-8);
  }
  CHECK(hyp.window_mass() == doctest::Approx(oracle::radial_mass(rho_hyp, 0.9)).epsilon(1e-9));
  CHECK(hyp.normalized_cdf(0.9) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hyp.radial_cdf(1.0), ConfigError);
  CHECK_THROWS_AS(LimitMeasure(RadialProfile::named(ProfileKind::hyperbolic, 0.5), 1.0), ConfigError);
}

TEST_CASE("flat ensemble density is 1/pi") {
  const LimitMeasure lm(RadialProfile::named(ProfileKind::flat, 0.5), 2.0);
  for (double r : {0.05, 0.3, 1.0, 1.7}) CHECK(std::abs(lm.density(std::polar(r, 0.4)) - 1.0 / oracle::pi) <= 1e-4);
  CHECK_THROWS(lm.density(0.0));
  CHECK(lm.atoms().empty());
  CHECK(lm.gaps().empty());
}

TEST_CASE("theta law with alpha 2 lives outside the unit disk") {
  const LimitMeasure lm(RadialProfile::named(ProfileKind::theta, 2.0), 4.0);
  // I(s) = s^2 / 4 for s > 0
  for (double r : {1.5, 2.0, 3.5}) {
    CHECK(lm.radial_cdf(r) == doctest::Approx(0.5 * std::log(r)).epsilon(1e-9));
    CHECK(std::abs(lm.density(r) - 1.0 / (4.0 * oracle::pi * r * r)) <= 1e-6);
  }
  CHECK(lm.radial_cdf(0.95) == 0.0);
  CHECK(lm.support_inner() == doctest::Approx(1.0));
  CHECK(lm.normalized_cdf(2.0) == doctest::Approx(std::log(2.0) / std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("kac law is a unit atom on the circle") {
  const LimitMeasure lm(RadialProfile::named(ProfileKind::kac), 2.0);
  REQUIRE(lm.atoms().size() == 1);
  CHECK(lm.atoms()[0].radius == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(lm.atoms()[0].mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(lm.radial_cdf(1.0) == 0.0);
  CHECK(lm.radial_cdf_closed(1.0) == doctest::Approx(1.0));
  REQUIRE(lm.gaps().size() == 2);
  CHECK(lm.gaps()[0].r_lo == 0.0);
  CHECK(std::isinf(lm.gaps()[1].r_hi));
  CHECK_THROWS(lm.density(1.0));
}

TEST_CASE("three circles: atoms, masses, gaps") {
  const LimitMeasure lm(RadialProfile::named(ProfileKind::three_circles), 4.0);
  const std::vector<Atom> atoms = lm.normalized_atoms();
  REQUIRE(atoms.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(atoms[i].radius - (i + 1.0)) <= 0.01 * (i + 1.0));
    CHECK(std::abs(atoms[i].mass - 1.0 / 3.0) <= 0.01);
  }
  bool found_12 = false;
  bool found_23 = false;
  for (const Gap& g : lm.gaps()) {
    found_12 |= std::abs(g.r_lo - 1.0) < 0.01 && std::abs(g.r_hi - 2.0) < 0.02;
    found_23 |= std::abs(g.r_lo - 2.0) < 0.02 && std::abs(g.r_hi - 3.0) < 0.03;
  }
  CHECK(found_12);
  CHECK(found_23);
  CHECK(lm.support_inner() == doctest::Approx(1.0));
  CHECK(lm.support_outer() == doctest::Approx(3.0));
  CHECK(lm.window_mass() == doctest::Approx(3.0));
}

TEST_CASE("quantiles invert the normalized CDF") {
  const LimitMeasure lm(RadialProfile::named(ProfileKind::elliptic, 0.5), 3.0);
  for (double p : {0.1, 0.5, 0.9}) CHECK(lm.normalized_cdf(lm.radial_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  const LimitMeasure tc(RadialProfile::named(ProfileKind::three_circles), 4.0);
  CHECK(tc.radial_quantile(0.5) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("samples follow the normalized law and are reproducible") {
  const LimitMeasure lm(RadialProfile::named(ProfileKind::elliptic, 0.5), 3.0);
  const auto a = lm.sample(20000, 11);
  CHECK(a == lm.sample(20000, 11));
  CHECK(a != lm.sample(20000, 12));
  std::vector<double> r;
  for (auto z : a) r.push_back(std::abs(z));
  std::sort(r.begin(), r.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double f = lm.normalized_cdf(r[i]);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / r.size()),
                   std::abs(f - static_cast<double>(i + 1) / r.size())});
  }
  // 99.9% KS quantile at m = 20000 is about 0.0138
  CHECK(ks <= 0.0138);

  const LimitMeasure tc(RadialProfile::named(ProfileKind::three_circles), 4.0);
  for (auto z : tc.sample(300, 5)) {
    const double rr = std::abs(z);
    CHECK(std::min({std::abs(rr - 1.0), std::abs(rr - 2.0), std::abs(rr - 3.0)}) <= 1e-9);
  }
}
