#include "zero_atlas/empirics.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace zero_atlas {

EmpiricalRadialCdf::EmpiricalRadialCdf(const ZeroSet& zs, long n) {
  if (n < 1) throw ConfigError("empirical_radial_cdf: n must be >= 1");
  std::map<double, long> at;
  if (zs.origin_multiplicity > 0) at[0.0] += zs.origin_multiplicity;
  for (const Zero& z : zs.zeros) at[std::abs(z.z)] += z.multiplicity;
  long running = 0;
  for (const auto& [r, c] : at) {
    running += c;
    plateaus_.emplace_back(r, static_cast<double>(running) / static_cast<double>(n));
  }
}

double EmpiricalRadialCdf::operator()(double r) const {
  const auto it = std::upper_bound(plateaus_.begin(), plateaus_.end(), r,
                                   [](double v, const auto& p) { return v < p.first; });
  if (it == plateaus_.begin()) return 0.0;
  return std::prev(it)->second;
}

EmpiricalRadialCdf empirical_radial_cdf(const ZeroSet& zs, long n) {
  return EmpiricalRadialCdf(zs, n);
}

double ks_radial(const ZeroSet& zs, const LimitMeasure& lm, double window) {
  const double mass = lm.radial_cdf_closed(window);
  if (!(mass > 0.0)) throw ConfigError("ks_radial: limit law has no mass in the window");
  std::map<double, long> at;
  long total = 0;
  if (zs.origin_multiplicity > 0) {
    at[0.0] += zs.origin_multiplicity;
    total += zs.origin_multiplicity;
  }
  for (const Zero& z : zs.zeros) {
    const double r = std::abs(z.z);
    if (r > window) continue;
    at[r] += z.multiplicity;
    total += z.multiplicity;
  }
  if (total == 0) throw ConfigError("ks_radial: no zeros in the window");
  double stat = 0.0;
  long running = 0;
  for (const auto& [r, c] : at) {
    const double before = static_cast<double>(running) / static_cast<double>(total);
    running += c;
    const double after = static_cast<double>(running) / static_cast<double>(total);
    const double f_open = std::min(1.0, lm.radial_cdf(r) / mass);
    const double f_closed = std::min(1.0, lm.radial_cdf_closed(r) / mass);
    stat = std::max({stat, std::abs(before - f_open), std::abs(after - f_closed)});
  }
  return std::min(stat, 1.0);
}

double ks_angular(const std::vector<double>& angles) {
  if (angles.size() < 10) throw ConfigError("ks_angular: need at least 10 zeros");
  std::vector<double> u(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    double a = std::fmod(angles[i], kTwoPi);
    if (a < 0.0) a += kTwoPi;
    u[i] = a / kTwoPi;
  }
  std::sort(u.begin(), u.end());
  const double m = static_cast<double>(u.size());
  double d_plus = 0.0;
  double d_minus = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d_plus = std::max(d_plus, static_cast<double>(i + 1) / m - u[i]);
    d_minus = std::max(d_minus, u[i] - static_cast<double>(i) / m);
  }
  return std::min(1.0, d_plus + d_minus);
}

double ks_angular(const ZeroSet& zs) {
  std::vector<double> angles;
  for (const Zero& z : zs.zeros) {
    if (z.outside_window) continue;
    for (int k = 0; k < z.multiplicity; ++k) angles.push_back(std::arg(z.z));
  }
  return ks_angular(angles);
}

PotentialSample potential_at(const RandomFunctionInstance& inst, const RadialProfile& profile,
                             std::complex<double> z) {
  if (z == std::complex<double>(0.0)) throw ConfigError("potential_at: z must be nonzero");
  if (std::log(std::abs(z)) >= profile.log_r0()) {
    throw ConfigError("potential_at: |z| must be below R0");
  }
  const double n = static_cast<double>(inst.n());
  std::complex<double> point = z;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const LogValue v = evaluate(inst, point);
    if (v.log_abs != kNegInf) {
      const double p_n = v.log_abs / n;
      const double target = conjugate_at(profile, std::log(std::abs(point)));
      return {point, p_n, target, p_n - target};
    }
    point = z * std::polar(1.0 + 1e-9 * (attempt + 1), 1e-9 * (attempt + 1));
  }
  throw NumericalError("potential_at: every jittered point is a zero");
}

std::vector<std::complex<double>> default_probes(const LimitMeasure& lm) {
  std::vector<std::complex<double>> out;
  const double angles[] = {0.3, 2.4, 4.5};
  for (int k = 0; k < 8; ++k) {
    double r = lm.window() * (k + 0.5) / 8.0;
    for (const Atom& a : lm.atoms()) {
      if (std::abs(r - a.radius) < 1e-3 * std::max(1.0, a.radius)) r += 2e-3 * std::max(1.0, a.radius);
    }
    for (double th : angles) out.push_back(std::polar(r, th));
  }
  return out;
}

long ComparisonReport::failed_trials() const {
  return std::count_if(per_trial.begin(), per_trial.end(), [](const TrialResult& t) { return !t.ok; });
}

ComparisonReport compare_report(const CompareConfig& config) {
  if (config.n < 1) throw ConfigError("compare: n must be >= 1");
  if (config.trials < 0) throw ConfigError("compare: trials must be >= 0");
  if (config.threads < 1) throw ConfigError("compare: threads must be >= 1");
  if (config.derivative_order < 0) throw ConfigError("compare: derivative order must be >= 0");
  const LimitMeasure lm(config.profile, config.window);
  const CoefficientSchedule schedule = coefficients(config.profile, config.n, 0);
  if (config.noise.kind == NoiseKind::pareto_log && !(config.noise.gamma > 0.0)) {
    throw ConfigError("compare: pareto_log gamma must be positive");
  }

  ComparisonReport report;
  report.ensemble = config.profile.describe();
  report.noise = std::string(to_string(config.noise.kind));
  report.n = config.n;
  report.trials = config.trials;
  report.window = config.window;
  report.base_seed = config.base_seed;
  report.per_trial.resize(static_cast<std::size_t>(config.trials));

  auto run_trial = [&](std::size_t i) {
    TrialResult& tr = report.per_trial[i];
    tr.seed = config.base_seed ^ static_cast<std::uint64_t>(i);
    try {
      RandomFunctionInstance inst = instantiate(schedule, config.noise, tr.seed, config.window);
      if (config.derivative_order > 0) inst = derivative(inst, config.derivative_order);
      tr.degree = static_cast<long>(inst.log_mag.size()) - 1;
      ZeroSet zs = find_roots(inst);
      tr.ks_radial = ks_radial(zs, lm, config.window);
      tr.ks_angular = ks_angular(zs);
      tr.count = 0;
      for (const Zero& z : zs.zeros) {
        if (std::abs(z.z) <= config.window) tr.count += z.multiplicity;
      }
      tr.count += zs.origin_multiplicity;
      for (const auto& probe : config.probes) {
        tr.p_n.push_back(potential_at(inst, config.profile, probe).p_n);
      }
      if (config.keep_zeros) tr.zeros = std::move(zs);
    } catch (const std::exception& e) {
      tr.ok = false;
      tr.error = e.what();
    }
  };

  const auto trials = static_cast<std::size_t>(config.trials);
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config.threads), trials);
  if (workers <= 1) {
    for (std::size_t i = 0; i < trials; ++i) run_trial(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < trials; i = next++) run_trial(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  long ok = 0;
  std::vector<double> p_sum(config.probes.size(), 0.0);
  for (const TrialResult& tr : report.per_trial) {
    if (!tr.ok) continue;
    ++ok;
    report.mean_ks_radial += tr.ks_radial;
    report.mean_ks_angular += tr.ks_angular;
    report.max_ks_radial = std::max(report.max_ks_radial, tr.ks_radial);
    report.max_ks_angular = std::max(report.max_ks_angular, tr.ks_angular);
    for (std::size_t j = 0; j < tr.p_n.size(); ++j) p_sum[j] += tr.p_n[j];
  }
  if (ok > 0) {
    report.mean_ks_radial /= static_cast<double>(ok);
    report.mean_ks_angular /= static_cast<double>(ok);
    for (std::size_t j = 0; j < config.probes.size(); ++j) {
      const std::complex<double> z = config.probes[j];
      const double mean = p_sum[j] / static_cast<double>(ok);
      const double target = lm.log_potential(std::abs(z));
      report.potential.push_back({z, mean, target, mean - target});
    }
  }
  return report;
}

}  // namespace zero_atlas
