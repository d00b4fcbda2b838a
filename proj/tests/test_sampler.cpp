#include <doctest.h>

#include <cmath>
#include <complex>

#include "support/oracles.hpp"
#include "zero_atlas/sampler.hpp"

using namespace zero_atlas;

namespace {

std::vector<std::complex<double>> coefficients_of(const RandomFunctionInstance& inst) {
  std::vector<std::complex<double>> c;
  for (std::size_t k = 0; k < inst.log_mag.size(); ++k) {
    c.push_back(std::exp(inst.log_mag[k]) * unit_phase(inst.phase[k]));
  }
  return c;
}

double phase_distance(double a, double b) {
  const double d = std::remainder(a - b, kTwoPi);
  return std::abs(d);
}

}  // namespace

TEST_CASE("noise names") {
  CHECK(parse_noise_kind("gaussian") == NoiseKind::complex_gaussian);
  CHECK(parse_noise_kind("pareto_log") == NoiseKind::pareto_log);
  CHECK_THROWS_AS(parse_noise_kind("student"), ConfigError);
  for (NoiseKind k : {NoiseKind::complex_gaussian, NoiseKind::real_gaussian, NoiseKind::rademacher,
                      NoiseKind::cauchy, NoiseKind::pareto_log, NoiseKind::uniform_disc,
                      NoiseKind::deterministic}) {
    CHECK(parse_noise_kind(to_string(k)) == k);
  }
  CHECK(make_noise(NoiseKind::cauchy).is_real());
  CHECK_FALSE(make_noise(NoiseKind::rademacher).is_continuous());
  CHECK_FALSE(make_noise(NoiseKind::pareto_log, 0.5).log_moment_finite());
  CHECK(make_noise(NoiseKind::pareto_log, 4.0).log_moment_finite());
}

TEST_CASE("noise draws are counter based") {
  const NoiseDistribution d = make_noise(NoiseKind::complex_gaussian);
  const NoiseDraws all = draw_noise(d, 100, 42);
  const NoiseDraws tail = draw_noise(d, 40, 42, 60);
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(tail.log_mag[i] == all.log_mag[60 + i]);
    CHECK(tail.phase[i] == all.phase[60 + i]);
  }
  CHECK(draw_noise(d, 5, 43).log_mag != draw_noise(d, 5, 42).log_mag);
  CHECK_THROWS_AS(draw_noise(make_noise(NoiseKind::pareto_log, 0.0), 5, 1), ConfigError);
}

TEST_CASE("noise laws have the stated moments") {
  const std::size_t m = 200000;
  auto mean_of = [&](NoiseKind kind, auto f) {
    const NoiseDraws d = draw_noise(make_noise(kind), m, 7);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += f(d.log_mag[i], d.phase[i]);
    return acc / static_cast<double>(m);
  };
  const auto abs2 = [](double lm, double) { return std::exp(2.0 * lm); };
  CHECK(mean_of(NoiseKind::complex_gaussian, abs2) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(mean_of(NoiseKind::real_gaussian, abs2) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(mean_of(NoiseKind::uniform_disc, abs2) == doctest::Approx(0.5).epsilon(0.01));
  CHECK(mean_of(NoiseKind::rademacher, abs2) == 1.0);
  // median |x| = 1 for the standard Cauchy law
  CHECK(mean_of(NoiseKind::cauchy, [](double lm, double) { return lm < 0.0 ? 1.0 : 0.0; }) ==
        doctest::Approx(0.5).epsilon(0.01));
  // E log|xi| = gamma / (gamma - 1) for pareto_log
  CHECK(mean_of(NoiseKind::pareto_log, [](double lm, double) { return lm; }) ==
        doctest::Approx(4.0 / 3.0).epsilon(0.01));
  const NoiseDraws real = draw_noise(make_noise(NoiseKind::rademacher), 1000, 3);
  for (double p : real.phase) CHECK((p == 0.0 || p == kPi));
}

TEST_CASE("unit phases on the real axis are exact") {
  CHECK(unit_phase(0.0) == std::complex<double>(1.0, 0.0));
  CHECK(unit_phase(kPi) == std::complex<double>(-1.0, 0.0));
  CHECK(std::abs(unit_phase(0.5) - std::polar(1.0, 0.5)) <= 1e-16);
}

TEST_CASE("truncation degree bounds the tail") {
  const CoefficientSchedule exp_series = coefficients(RadialProfile::named(ProfileKind::flat, 1.0), 1, 0);
  const double r = 50.0;
  const long K = truncation_degree(exp_series, r, 1e-12);
  // sum_{k > K} r^k / k! relative to e^r, summed directly
  double tail = 0.0;
  for (long k = K + 1; k < K + 400; ++k) tail += std::exp(k * std::log(r) - std::lgamma(k + 1.0) - r);
  CHECK(tail * std::exp(r) <= 1e-12 * std::exp(0.05 * K) + 1e-300);
  CHECK(K > 100);
  CHECK(truncation_degree(coefficients(RadialProfile::named(ProfileKind::kac), 30, 0), 5.0, 1e-12) == 30);
  const CoefficientSchedule hyp = coefficients(RadialProfile::named(ProfileKind::hyperbolic, 0.5), 10, 0);
  CHECK_THROWS_AS(truncation_degree(hyp, 1.0, 1e-12), ConfigError);
}

TEST_CASE("instances: polynomial degree and entire truncation") {
  const CoefficientSchedule kac = coefficients(RadialProfile::named(ProfileKind::kac), 50, 0);
  const RandomFunctionInstance a = instantiate(kac, make_noise(NoiseKind::complex_gaussian), 9, 2.0);
  CHECK(a.degree == 50);
  CHECK(a.log_mag.size() == 51);
  CHECK(a.log_mag == instantiate(kac, make_noise(NoiseKind::complex_gaussian), 9, 2.0).log_mag);
  const CoefficientSchedule flat = coefficients(RadialProfile::named(ProfileKind::flat, 0.5), 100, 0);
  const RandomFunctionInstance b = instantiate(flat, make_noise(NoiseKind::complex_gaussian), 9, 1.0);
  // realized terms beyond the cut are below 1e-12 of the peak on |z| = 1
  const NoiseDraws noise = draw_noise(make_noise(NoiseKind::complex_gaussian),
                                      static_cast<std::size_t>(b.degree) + 200, 9);
  double peak = kNegInf;
  for (double v : b.log_mag) peak = std::max(peak, v);
  double dropped = 0.0;
  for (long k = b.degree + 1; k < b.degree + 200; ++k) {
    dropped += std::exp(flat.log_mag(k) + noise.log_mag[static_cast<std::size_t>(k)] - peak);
  }
  CHECK(dropped <= 1e-12);
  CHECK(b.degree < 400);
  CHECK_THROWS_AS(instantiate(flat, make_noise(NoiseKind::complex_gaussian), 9, 0.0), ConfigError);
}

TEST_CASE("evaluation against 256-bit arithmetic") {
  const CoefficientSchedule s = coefficients(RadialProfile::named(ProfileKind::elliptic, 0.5), 60, 0);
  const RandomFunctionInstance inst = instantiate(s, make_noise(NoiseKind::complex_gaussian), 5, 3.0);
  const auto c = coefficients_of(inst);
  for (int i = 0; i < 40; ++i) {
    const std::complex<double> z = std::polar(0.1 + 0.1 * i, 0.77 * i);
    const LogValue v = evaluate(inst, z);
    const oracle::mp_complex ref =
        oracle::mp_eval(c, oracle::mp_complex(oracle::mp_real(z.real()), oracle::mp_real(z.imag())));
    CHECK(std::abs(v.log_abs - static_cast<double>(log(abs(ref)))) <= 1e-11);
    CHECK(phase_distance(v.phase, static_cast<double>(arg(ref))) <= 1e-11);
  }
}

TEST_CASE("evaluation with huge dynamic range") {
  const CoefficientSchedule s = coefficients(RadialProfile::named(ProfileKind::flat, 1.0), 1, 0);
  const RandomFunctionInstance inst = instantiate(s, make_noise(NoiseKind::deterministic), 0, 60.0);
  const LogValue v = evaluate(inst, 60.0);
  CHECK(v.log_abs == doctest::Approx(60.0).epsilon(1e-14));
  // heavy cancellation on the imaginary axis: backward-stable bound
  const std::complex<double> z(0.0, 30.0);
  const auto c = coefficients_of(inst);
  double scale = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) scale += std::abs(c[k]) * std::pow(30.0, static_cast<double>(k));
  const oracle::mp_complex ref = oracle::mp_eval(c, oracle::mp_complex(oracle::mp_real(0), oracle::mp_real(30)));
  const std::complex<double> ref_d(static_cast<double>(ref.real()), static_cast<double>(ref.imag()));
  CHECK(std::abs(evaluate(inst, z).value() - ref_d) <= 1e-13 * scale);
}

TEST_CASE("derivatives") {
  const std::vector<std::complex<double>> c{{1.0, 0.0}, {-2.0, 1.0}, {0.5, 0.0}, {0.0, 3.0}, {1.0, -1.0}};
  const RandomFunctionInstance inst = instance_from_coefficients(c);
  const std::complex<double> z(0.7, -1.3);
  for (int order = 1; order <= 3; ++order) {
    std::complex<double> ref(0.0);
    for (std::size_t k = order; k < c.size(); ++k) {
      double fall = 1.0;
      for (int j = 0; j < order; ++j) fall *= static_cast<double>(k - j);
      ref += fall * c[k] * std::pow(z, static_cast<double>(k - order));
    }
    CHECK(std::abs(evaluate_derivative(inst, z, order).value() - ref) <= 1e-12 * std::abs(ref));
    CHECK(std::abs(evaluate(derivative(inst, order), z).value() - ref) <= 1e-12 * std::abs(ref));
  }
  CHECK_THROWS(derivative(inst, 5));
  CHECK(evaluate(instance_from_coefficients(c), 0.0).value() == std::complex<double>(1.0, 0.0));
}

TEST_CASE("manifests replay the same instance") {
  const CoefficientSchedule s = coefficients(RadialProfile::named(ProfileKind::flat, 0.5, 0.1), 80, 0);
  const RandomFunctionInstance inst = instantiate(s, make_noise(NoiseKind::pareto_log, 3.0), 77, 1.5);
  const InstanceManifest m = manifest_of(inst);
  const std::string text = serialize_manifest(m);
  const InstanceManifest back = parse_manifest(text);
  CHECK(serialize_manifest(back) == text);
  const RandomFunctionInstance again = replay(back);
  CHECK(again.degree == inst.degree);
  CHECK(again.log_mag == inst.log_mag);
  CHECK(again.phase == inst.phase);
  CHECK_THROWS_AS(replay(manifest_of(instance_from_coefficients(std::vector<std::complex<double>>{1.0, 2.0}))),
                  ConfigError);
}
