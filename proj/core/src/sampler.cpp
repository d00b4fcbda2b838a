#include "zero_atlas/sampler.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace zero_atlas {

namespace {

constexpr double kSkipBelowPeak = 60.0;

double wrap_phase(double p) {
  if (p >= kTwoPi) p -= kTwoPi;
  if (p < 0.0) p += kTwoPi;
  if (p >= kTwoPi || p < 0.0) p = std::fmod(std::fmod(p, kTwoPi) + kTwoPi, kTwoPi);
  return p;
}

void draw_one(const NoiseDistribution& dist, std::uint64_t seed, std::uint64_t k, double& log_mag,
              double& phase) {
  const double u1 = counter_uniform(seed, k, 0);
  const double u2 = counter_uniform(seed, k, 1);
  switch (dist.kind) {
    case NoiseKind::complex_gaussian:
      log_mag = 0.5 * std::log(-std::log(u1));
      phase = kTwoPi * u2;
      return;
    case NoiseKind::real_gaussian: {
      const double x = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
      log_mag = std::log(std::abs(x));
      phase = x < 0.0 ? kPi : 0.0;
      return;
    }
    case NoiseKind::rademacher:
      log_mag = 0.0;
      phase = u1 < 0.5 ? kPi : 0.0;
      return;
    case NoiseKind::cauchy: {
      const double x = std::tan(kPi * (u1 - 0.5));
      log_mag = std::log(std::abs(x));
      phase = x < 0.0 ? kPi : 0.0;
      return;
    }
    case NoiseKind::pareto_log:
      log_mag = std::pow(u1, -1.0 / dist.gamma);
      phase = kTwoPi * u2;
      return;
    case NoiseKind::uniform_disc:
      log_mag = 0.5 * std::log(u1);
      phase = kTwoPi * u2;
      return;
    case NoiseKind::deterministic:
      log_mag = 0.0;
      phase = 0.0;
      return;
  }
}

// Largest schedule term log|f_k| + k log r, scanning until terms are
// decreasing and far below the running peak.
double schedule_peak(const CoefficientSchedule& schedule, double log_r, long k_cap) {
  double peak = kNegInf;
  double prev = kNegInf;
  for (long k = 0; k <= k_cap; ++k) {
    const double lm = schedule.log_mag(k);
    const double term = lm + static_cast<double>(k) * log_r;
    peak = std::max(peak, term);
    if (k > 0 && std::isfinite(term) && term < peak - 200.0 && term < prev) break;
    prev = term;
  }
  return peak;
}

double log_falling(long k, int m) {
  if (m == 1) return std::log(static_cast<double>(k));
  return log_factorial(k) - log_factorial(k - m);
}

struct ScaledSum {
  CompensatedSum re;
  CompensatedSum im;
};

LogValue finish(double peak, const ScaledSum& sum) {
  const double re = sum.re.value();
  const double im = sum.im.value();
  const double a = std::hypot(re, im);
  if (a == 0.0) return {kNegInf, 0.0};
  return {peak + std::log(a), std::atan2(im, re)};
}

}  // namespace

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::complex_gaussian: return "complex_gaussian";
    case NoiseKind::real_gaussian: return "real_gaussian";
    case NoiseKind::rademacher: return "rademacher";
    case NoiseKind::cauchy: return "cauchy";
    case NoiseKind::pareto_log: return "pareto_log";
    case NoiseKind::uniform_disc: return "uniform_disc";
    case NoiseKind::deterministic: return "deterministic";
  }
  return "deterministic";
}

NoiseKind parse_noise_kind(std::string_view name) {
  std::string n(name);
  std::replace(n.begin(), n.end(), '-', '_');
  if (n == "complex_gaussian" || n == "gaussian") return NoiseKind::complex_gaussian;
  if (n == "real_gaussian") return NoiseKind::real_gaussian;
  if (n == "rademacher") return NoiseKind::rademacher;
  if (n == "cauchy") return NoiseKind::cauchy;
  if (n == "pareto_log") return NoiseKind::pareto_log;
  if (n == "uniform_disc") return NoiseKind::uniform_disc;
  if (n == "deterministic") return NoiseKind::deterministic;
  throw ConfigError("unknown noise kind '" + std::string(name) + "'");
}

bool NoiseDistribution::is_real() const {
  return kind == NoiseKind::real_gaussian || kind == NoiseKind::rademacher ||
         kind == NoiseKind::cauchy || kind == NoiseKind::deterministic;
}

bool NoiseDistribution::is_continuous() const {
  return kind != NoiseKind::rademacher && kind != NoiseKind::deterministic;
}

bool NoiseDistribution::log_moment_finite() const {
  return kind != NoiseKind::pareto_log || gamma > 1.0;
}

NoiseDistribution make_noise(NoiseKind kind, double gamma) {
  if (kind == NoiseKind::pareto_log && (!(gamma > 0.0) || !std::isfinite(gamma))) {
    throw ConfigError("pareto_log noise: gamma must be a finite positive number");
  }
  return NoiseDistribution{kind, gamma};
}

NoiseDraws draw_noise(const NoiseDistribution& dist, std::size_t count, std::uint64_t seed,
                      std::size_t offset) {
  if (count < 1) throw ConfigError("draw_noise: count must be >= 1");
  if (dist.kind == NoiseKind::pareto_log && !(dist.gamma > 0.0)) {
    throw ConfigError("pareto_log noise: gamma must be positive");
  }
  NoiseDraws out;
  out.log_mag.resize(count);
  out.phase.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    draw_one(dist, seed, offset + i, out.log_mag[i], out.phase[i]);
  }
  return out;
}

long truncation_degree(const CoefficientSchedule& schedule, double r, double tol) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("truncation_degree: r must be >= 0");
  if (!(tol > 0.0)) throw ConfigError("truncation_degree: tol must be positive");
  if (schedule.degree_hint()) return *schedule.degree_hint();
  double log_r0 = kInf;
  if (schedule.profile()) log_r0 = schedule.profile()->log_r0();
  const double log_r = r > 0.0 ? std::log(r) : -745.0;
  if (log_r >= log_r0) throw ConfigError("truncation_degree: r is not below R0 (series diverges)");
  const double eps = std::min(0.05, 0.5 * (log_r0 - log_r));
  const double log_tol = std::log(tol);

  std::vector<double> terms;
  double remainder = kNegInf;
  for (long k = 0;; ++k) {
    if (k > kMaxScheduleTerms) {
      throw NumericalError("truncation_degree: tail does not decay (r beyond convergence radius)");
    }
    const double term = schedule.log_mag(k) + (eps + log_r) * static_cast<double>(k);
    terms.push_back(term);
    if (k == 0) continue;
    const double prev = terms[static_cast<std::size_t>(k - 1)];
    const double slope = term - prev;
    if (term == kNegInf && prev == kNegInf && k > 64) {
      // schedule vanished identically beyond this point
      remainder = kNegInf;
      break;
    }
    if (std::isfinite(term) && term < log_tol - 40.0 && slope < -1e-3) {
      // log-concave terms: geometric bound on everything after k
      remainder = term + slope - std::log1p(-std::exp(slope));
      break;
    }
  }
  // tail(K) = log sum_{k>K} exp(term_k)
  double tail = remainder;
  for (long k = static_cast<long>(terms.size()) - 1; k >= 0; --k) {
    if (tail >= log_tol) return k + 1;
    const double t = terms[static_cast<std::size_t>(k)];
    const double hi = std::max(tail, t);
    if (hi != kNegInf) tail = hi + std::log(std::exp(tail - hi) + std::exp(t - hi));
  }
  return 0;
}

RandomFunctionInstance instantiate(const CoefficientSchedule& schedule,
                                   const NoiseDistribution& dist, std::uint64_t seed,
                                   double window_radius) {
  if (!(window_radius > 0.0) || !std::isfinite(window_radius)) {
    throw ConfigError("instantiate: window radius must be positive and finite");
  }
  RandomFunctionInstance inst{schedule, dist, seed, 0, window_radius, {}, {}, {}, {}};
  const double log_w = std::log(window_radius);
  long degree;
  if (schedule.degree_hint()) {
    degree = *schedule.degree_hint();
  } else {
    const double peak_sched = schedule_peak(schedule, log_w, kMaxScheduleTerms);
    const double tol = 1e-12 * std::min(1.0, std::exp(peak_sched));
    const long horizon = truncation_degree(schedule, window_radius, std::max(tol, 1e-300));
    NoiseDraws draws = draw_noise(dist, static_cast<std::size_t>(horizon) + 1, seed);
    std::vector<double> realized(static_cast<std::size_t>(horizon) + 1);
    double peak = kNegInf;
    for (long k = 0; k <= horizon; ++k) {
      const auto i = static_cast<std::size_t>(k);
      realized[i] = schedule.log_mag(k) + draws.log_mag[i] + static_cast<double>(k) * log_w;
      peak = std::max(peak, realized[i]);
    }
    const double cut = peak + std::log(1e-12);
    double tail = kNegInf;
    degree = horizon;
    for (long k = horizon; k >= 1; --k) {
      const double t = realized[static_cast<std::size_t>(k)];
      const double hi = std::max(tail, t);
      const double next = hi == kNegInf ? kNegInf
                                        : hi + std::log(std::exp(tail - hi) + std::exp(t - hi));
      if (next >= cut) break;
      tail = next;
      degree = k - 1;
    }
    degree = std::max<long>(degree, 1);
  }
  NoiseDraws draws = draw_noise(dist, static_cast<std::size_t>(degree) + 1, seed);
  inst.degree = degree;
  inst.noise_log_mag = std::move(draws.log_mag);
  inst.noise_phase = std::move(draws.phase);
  inst.log_mag.resize(inst.noise_log_mag.size());
  inst.phase.resize(inst.noise_log_mag.size());
  for (long k = 0; k <= degree; ++k) {
    const auto i = static_cast<std::size_t>(k);
    inst.log_mag[i] = schedule.log_mag(k) + inst.noise_log_mag[i];
    inst.phase[i] = wrap_phase(schedule.phase(k) + inst.noise_phase[i]);
  }
  return inst;
}

RandomFunctionInstance instance_from_terms(std::vector<double> log_mag, std::vector<double> phase,
                                           long n, double window_radius) {
  CoefficientSchedule schedule = explicit_schedule(log_mag, phase, n);
  const long degree = *schedule.degree_hint();
  log_mag.resize(static_cast<std::size_t>(degree) + 1);
  phase.resize(log_mag.size());
  for (double& p : phase) p = wrap_phase(p);
  const auto count = log_mag.size();
  return RandomFunctionInstance{std::move(schedule),
                                NoiseDistribution{NoiseKind::deterministic, 4.0},
                                0,
                                degree,
                                window_radius,
                                std::vector<double>(count, 0.0),
                                std::vector<double>(count, 0.0),
                                std::move(log_mag),
                                std::move(phase)};
}

RandomFunctionInstance instance_from_coefficients(std::span<const std::complex<double>> c, long n,
                                                  double window_radius) {
  std::vector<double> lm(c.size());
  std::vector<double> ph(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double a = std::abs(c[k]);
    lm[k] = a > 0.0 ? std::log(a) : kNegInf;
    ph[k] = a > 0.0 ? std::arg(c[k]) : 0.0;
  }
  return instance_from_terms(std::move(lm), std::move(ph), n, window_radius);
}

std::complex<double> LogValue::value() const {
  if (log_abs == kNegInf) return {0.0, 0.0};
  return std::polar(std::exp(log_abs), phase);
}

std::complex<double> unit_phase(double phase) {
  if (phase == 0.0) return {1.0, 0.0};
  if (phase == kPi) return {-1.0, 0.0};
  return std::polar(1.0, phase);
}

LogValue evaluate_derivative(const RandomFunctionInstance& inst, std::complex<double> z, int order) {
  if (order < 0) throw ConfigError("evaluate: derivative order must be >= 0");
  const auto& lm = inst.log_mag;
  const auto& ph = inst.phase;
  const long d = static_cast<long>(lm.size()) - 1;
  if (std::all_of(lm.begin(), lm.end(), [](double v) { return v == kNegInf; })) {
    throw NumericalError("evaluate: identically zero realization");
  }
  if (order > d) return {kNegInf, 0.0};
  const double r = std::abs(z);
  if (r == 0.0) {
    const auto i = static_cast<std::size_t>(order);
    if (lm[i] == kNegInf) return {kNegInf, 0.0};
    return {lm[i] + log_factorial(order), ph[i]};
  }
  const double log_r = std::log(r);
  const double theta = std::arg(z);
  std::vector<double> e(static_cast<std::size_t>(d - order) + 1);
  double peak = kNegInf;
  for (long k = order; k <= d; ++k) {
    const auto i = static_cast<std::size_t>(k);
    double v = lm[i];
    if (v != kNegInf) {
      if (order > 0) v += log_falling(k, order);
      v += static_cast<double>(k - order) * log_r;
    }
    e[static_cast<std::size_t>(k - order)] = v;
    peak = std::max(peak, v);
  }
  if (peak == kNegInf) return {kNegInf, 0.0};
  ScaledSum sum;
  for (long k = order; k <= d; ++k) {
    const double v = e[static_cast<std::size_t>(k - order)] - peak;
    if (v < -kSkipBelowPeak) continue;
    const double mag = std::exp(v);
    const std::complex<double> rot = std::polar(1.0, static_cast<double>(k - order) * theta);
    const double p = ph[static_cast<std::size_t>(k)];
    std::complex<double> term;
    if (p == 0.0) {
      term = rot;
    } else if (p == kPi) {
      term = -rot;
    } else {
      term = unit_phase(p) * rot;
    }
    sum.re.add(mag * term.real());
    sum.im.add(mag * term.imag());
  }
  return finish(peak, sum);
}

LogValue evaluate(const RandomFunctionInstance& inst, std::complex<double> z) {
  return evaluate_derivative(inst, z, 0);
}

RandomFunctionInstance derivative(const RandomFunctionInstance& inst, int order) {
  if (order < 1) throw ConfigError("derivative: order must be >= 1");
  const long d = static_cast<long>(inst.log_mag.size()) - 1;
  if (order > d) throw ConfigError("derivative: order exceeds degree (derivative vanishes)");
  std::vector<double> lm;
  std::vector<double> ph;
  for (long k = order; k <= d; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double v = inst.log_mag[i];
    lm.push_back(v == kNegInf ? kNegInf : v + log_falling(k, order));
    ph.push_back(inst.phase[i]);
  }
  RandomFunctionInstance out =
      instance_from_terms(std::move(lm), std::move(ph), inst.n(), inst.window);
  out.seed = inst.seed;
  return out;
}

InstanceManifest manifest_of(const RandomFunctionInstance& inst) {
  InstanceManifest m;
  m.schedule_id = inst.schedule.id();
  if (inst.schedule.profile()) m.profile = serialize_profile(*inst.schedule.profile());
  m.n = inst.n();
  m.noise = inst.noise.kind;
  m.gamma = inst.noise.gamma;
  m.seed = inst.seed;
  m.degree = inst.degree;
  m.window = inst.window;
  return m;
}

std::string serialize_manifest(const InstanceManifest& m) {
  std::ostringstream os;
  os << "schedule = " << m.schedule_id << '\n';
  os << "n = " << m.n << '\n';
  os << "noise = " << to_string(m.noise) << '\n';
  os << "gamma = " << format_double(m.gamma) << '\n';
  os << "seed = " << m.seed << '\n';
  os << "degree = " << m.degree << '\n';
  os << "window = " << format_double(m.window) << '\n';
  std::istringstream ps(m.profile);
  std::string line;
  while (std::getline(ps, line)) {
    if (!line.empty()) os << "profile." << line << '\n';
  }
  return os.str();
}

InstanceManifest parse_manifest(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::string profile;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("profile.", 0) == 0) {
      profile += line.substr(8) + '\n';
      continue;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ConfigError("manifest: expected 'key = value'");
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("manifest: missing key '" + key + "'");
    return it->second;
  };
  InstanceManifest m;
  try {
    m.schedule_id = need("schedule");
    m.n = std::stol(need("n"));
    m.noise = parse_noise_kind(need("noise"));
    m.gamma = parse_double(need("gamma"));
    m.seed = std::stoull(need("seed"));
    m.degree = std::stol(need("degree"));
    m.window = parse_double(need("window"));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError(std::string("manifest: malformed number: ") + e.what());
  }
  m.profile = profile;
  return m;
}

RandomFunctionInstance replay(const InstanceManifest& m) {
  if (m.profile.empty()) throw ConfigError("replay: explicit schedules cannot be replayed");
  const RadialProfile profile = parse_profile(m.profile);
  const CoefficientSchedule schedule = coefficients(profile, m.n, 0);
  RandomFunctionInstance inst = instantiate(schedule, make_noise(m.noise, m.gamma), m.seed, m.window);
  if (inst.degree != m.degree) throw ConfigError("replay: degree differs from manifest");
  return inst;
}

}  // namespace zero_atlas
