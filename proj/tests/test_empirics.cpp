#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "zero_atlas/empirics.hpp"

using namespace zero_atlas;

namespace {

ZeroSet zero_set(const std::vector<std::complex<double>>& zs, long origin = 0, double window = 10.0) {
  ZeroSet out;
  out.window = window;
  out.origin_multiplicity = origin;
  for (auto z : zs) out.zeros.push_back({z, 1, 0.0, std::abs(z) > window});
  out.degree = static_cast<long>(zs.size()) + origin;
  return out;
}

// sup over a dense grid of |F_emp - F| from both sides of every step
double brute_ks(std::vector<double> r, const std::function<double(double)>& F) {
  std::sort(r.begin(), r.end());
  const double m = static_cast<double>(r.size());
  double d = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double below = std::nextafter(r[i], 0.0);
    const double cnt_below = static_cast<double>(std::lower_bound(r.begin(), r.end(), r[i]) - r.begin());
    const double cnt_at = static_cast<double>(std::upper_bound(r.begin(), r.end(), r[i]) - r.begin());
    d = std::max({d, std::abs(cnt_below / m - F(below)), std::abs(cnt_at / m - F(r[i]))});
  }
  return d;
}

double brute_kuiper(std::vector<double> u) {
  for (double& x : u) {
    x = std::fmod(x, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    x /= kTwoPi;
  }
  std::sort(u.begin(), u.end());
  const double m = static_cast<double>(u.size());
  double plus = 0.0;
  double minus = 0.0;
  for (int g = 0; g <= 200000; ++g) {
    const double x = g / 200000.0;
    const double f = static_cast<double>(std::upper_bound(u.begin(), u.end(), x) - u.begin()) / m;
    const double f_left = static_cast<double>(std::lower_bound(u.begin(), u.end(), x) - u.begin()) / m;
    plus = std::max(plus, f - x);
    minus = std::max(minus, x - f_left);
  }
  return plus + minus;
}

}  // namespace

TEST_CASE("empirical radial CDF is right-continuous and counts the origin") {
  const ZeroSet zs = zero_set({0.5, {0.0, 0.5}, 2.0, -3.0}, 1);
  const EmpiricalRadialCdf F = empirical_radial_cdf(zs, 10);
  CHECK(F(-1.0) == 0.0);
  CHECK(F(0.0) == doctest::Approx(0.1));
  CHECK(F(0.49) == doctest::Approx(0.1));
  CHECK(F(0.5) == doctest::Approx(0.3));
  CHECK(F(2.5) == doctest::Approx(0.4));
  CHECK(F.terminal() == doctest::Approx(0.5));
  CHECK(F.plateaus().size() == 4);
  CHECK_THROWS_AS(empirical_radial_cdf(zs, 0), ConfigError);
}

TEST_CASE("radial KS against the elliptic law") {
  const double W = 3.0;
  const LimitMeasure lm(RadialProfile::named(ProfileKind::elliptic, 0.5), W);
  std::vector<std::complex<double>> pts;
  std::vector<double> radii;
  for (int i = 0; i < 400; ++i) {
    const double r = 0.02 + 3.5 * counter_uniform(4, i, 0);
    pts.push_back(std::polar(r, 0.3 * i));
    if (r <= W) radii.push_back(r);
  }
  const double norm = W * W / (1.0 + W * W);
  const double expect = brute_ks(radii, [&](double r) { return r * r / (1.0 + r * r) / norm; });
  CHECK(ks_radial(zero_set(pts), lm, W) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("radial KS handles atoms with both one-sided limits") {
  const LimitMeasure lm(RadialProfile::named(ProfileKind::kac), 2.0);
  std::vector<std::complex<double>> on_circle;
  for (int i = 0; i < 20; ++i) on_circle.push_back(std::polar(1.0, 0.1 * i));
  CHECK(ks_radial(zero_set(on_circle), lm, 2.0) <= 1e-12);
  std::vector<std::complex<double>> off;
  for (int i = 0; i < 20; ++i) off.push_back(std::polar(i < 5 ? 0.5 : 1.0, 0.1 * i));
  CHECK(ks_radial(zero_set(off), lm, 2.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(ks_radial(zero_set({5.0}), lm, 2.0), ConfigError);
}

TEST_CASE("angular Kuiper statistic") {
  std::vector<double> angles;
  for (int i = 0; i < 50; ++i) angles.push_back(kTwoPi * counter_uniform(9, i, 0) * 0.7);
  const double v = ks_angular(angles);
  CHECK(v == doctest::Approx(brute_kuiper(angles)).epsilon(1e-4));
  std::vector<double> rotated = angles;
  for (double& a : rotated) a += 2.1;
  CHECK(ks_angular(rotated) == doctest::Approx(v).epsilon(1e-12));
  std::vector<double> even;
  for (int i = 0; i < 100; ++i) even.push_back(kTwoPi * (i + 0.5) / 100.0);
  CHECK(ks_angular(even) == doctest::Approx(0.01));
  CHECK_THROWS_AS(ks_angular(std::vector<double>(5, 0.0)), ConfigError);
}

TEST_CASE("potential samples and probe layout") {
  // G(z) = 1 + z^2 at n = 2
  const RandomFunctionInstance inst =
      instance_from_coefficients(std::vector<std::complex<double>>{1.0, 0.0, 1.0}, 2, 3.0);
  const RadialProfile kac = RadialProfile::named(ProfileKind::kac);
  const PotentialSample ps = potential_at(inst, kac, {2.0, 0.0});
  CHECK(ps.p_n == doctest::Approx(0.5 * std::log(5.0)));
  CHECK(ps.target == doctest::Approx(std::log(2.0)));
  // G(z) = z - 1 vanishes exactly at the probe, which must be moved
  const RandomFunctionInstance line =
      instance_from_coefficients(std::vector<std::complex<double>>{-1.0, 1.0}, 1, 3.0);
  const PotentialSample on_zero = potential_at(line, kac, {1.0, 0.0});
  CHECK(on_zero.z != std::complex<double>(1.0, 0.0));
  CHECK(std::abs(on_zero.z - 1.0) <= 1e-8);
  CHECK(std::isfinite(on_zero.p_n));
  CHECK_THROWS_AS(potential_at(inst, kac, 0.0), ConfigError);

  const LimitMeasure lm(RadialProfile::named(ProfileKind::three_circles), 4.0);
  const auto probes = default_probes(lm);
  CHECK(probes.size() == 24);
  for (auto z : probes) {
    for (double a : {1.0, 2.0, 3.0}) CHECK(std::abs(std::abs(z) - a) >= 1e-3);
    CHECK(std::abs(z) < 4.0);
  }
}

TEST_CASE("comparison campaigns are reproducible across thread counts") {
  CompareConfig cfg;
  cfg.profile = RadialProfile::named(ProfileKind::lo_poly, 0.5);
  cfg.n = 120;
  cfg.trials = 6;
  cfg.window = 1.0;
  cfg.base_seed = 99;
  cfg.probes = {{0.5, 0.1}, {1.5, 0.0}};
  const ComparisonReport one = compare_report(cfg);
  cfg.threads = 3;
  const ComparisonReport three = compare_report(cfg);
  REQUIRE(one.per_trial.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(one.per_trial[i].seed == (99ULL ^ i));
    CHECK(one.per_trial[i].ok);
    CHECK(one.per_trial[i].ks_radial == three.per_trial[i].ks_radial);
    CHECK(one.per_trial[i].p_n == three.per_trial[i].p_n);
    CHECK(one.per_trial[i].count <= 120);
    CHECK(one.per_trial[i].count >= 100);
  }
  CHECK(one.mean_ks_radial == three.mean_ks_radial);
  CHECK(one.mean_ks_radial <= 0.15);
  CHECK(one.mean_ks_angular <= 0.15);
  REQUIRE(one.potential.size() == 2);
  // I(log r) = r^2 / 2 inside the unit disk, log r + 1/2 outside
  CHECK(one.potential[0].target == doctest::Approx(0.5 * std::norm(cfg.probes[0])));
  CHECK(one.potential[1].target == doctest::Approx(std::log(1.5) + 0.5));
  CHECK(std::abs(one.potential[1].gap) <= 0.05);
  CHECK(one.failed_trials() == 0);
}

TEST_CASE("comparison options: kept zeros and derivatives") {
  CompareConfig cfg;
  cfg.profile = RadialProfile::named(ProfileKind::kac);
  cfg.n = 60;
  cfg.trials = 2;
  cfg.window = 2.0;
  cfg.keep_zeros = true;
  cfg.derivative_order = 1;
  const ComparisonReport rep = compare_report(cfg);
  REQUIRE(rep.per_trial[0].zeros.has_value());
  CHECK(rep.per_trial[0].degree == 59);
  CHECK(rep.per_trial[0].zeros->total_multiplicity() == 59);
  cfg.trials = -1;
  CHECK_THROWS_AS(compare_report(cfg), ConfigError);
}
