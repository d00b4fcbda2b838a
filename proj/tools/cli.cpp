#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "zero_atlas/empirics.hpp"
#include "zero_atlas/potential.hpp"

namespace zero_atlas::cli {

namespace {

using nlohmann::json;

constexpr double kCompareCheckKs = 0.08;
constexpr double kPotentialCheckQuadrature = 1e-4;
constexpr double kPotentialCheckFlatness = 1e-3;

double alpha_of(const RunConfig& c) {
  if (c.alpha) return *c.alpha;
  const ProfileKind kind = parse_profile_kind(c.ensemble);
  if (kind == ProfileKind::theta) return 2.0;
  return kind == ProfileKind::lo_poly ? 0.5 : 1.0;
}

RadialProfile make_profile(const RunConfig& c) {
  return RadialProfile::named(parse_profile_kind(c.ensemble), alpha_of(c), c.beta);
}

double default_window(const RadialProfile& p) {
  if (p.is_polynomial()) {
    const double slope = p.convexified().du_left(p.t0());
    if (std::isfinite(slope)) return 1.5 * std::exp(slope);
  }
  if (std::isfinite(p.log_r0())) return 0.9 * p.r0();
  return 2.0;
}

double window_of(const RunConfig& c, const RadialProfile& p) {
  const double w = c.window ? *c.window : default_window(p);
  if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("window must be a finite positive radius");
  if (std::log(w) >= p.log_r0()) throw ConfigError("window must lie inside the radius of convergence");
  return w;
}

NoiseDistribution noise_of(const RunConfig& c) {
  const NoiseKind kind = parse_noise_kind(c.noise);
  if (kind == NoiseKind::pareto_log && !(c.gamma > 0.0)) {
    throw ConfigError("pareto_log noise needs --gamma > 0");
  }
  return make_noise(kind, c.gamma);
}

void check_common(const RunConfig& c) {
  if (c.n < 1) throw ConfigError("--n must be >= 1");
  if (c.trials < 1) throw ConfigError("--trials must be >= 1");
  if (c.threads < 1) throw ConfigError("--threads must be >= 1");
}

std::string format_of(const RunConfig& c, const std::string& fallback) {
  const std::string f = c.format.empty() ? fallback : c.format;
  if (f != "json" && f != "csv") throw ConfigError("--format must be json or csv");
  return f;
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json config_json(const RunConfig& c, const RadialProfile& p) {
  return {{"subcommand", c.subcommand}, {"ensemble", p.describe()}, {"alpha", alpha_of(c)},
          {"beta", c.beta},             {"noise", c.noise},          {"gamma", c.gamma},
          {"n", c.n},                   {"trials", c.trials},        {"seed", c.seed}};
}

std::string csv_row(std::initializer_list<double> values) {
  std::string line;
  for (double v : values) {
    if (!line.empty()) line += ',';
    if (std::isfinite(v)) line += format_double(v);
  }
  return line + '\n';
}

std::string cmd_limit(const RunConfig& c, std::string& /*violation*/) {
  const RadialProfile p = make_profile(c);
  const double window = window_of(c, p);
  const std::string fmt = format_of(c, "json");
  const LimitMeasure lm(p, window);

  constexpr int kRows = 200;
  std::vector<std::array<double, 4>> rows;
  for (int i = 1; i <= kRows; ++i) {
    const double r = window * i / kRows;
    double dens = std::numeric_limits<double>::quiet_NaN();
    try {
      dens = lm.density(r);
    } catch (const std::exception&) {
      // on an atom circle or at the origin
    }
    rows.push_back({r, lm.radial_cdf(r), lm.normalized_cdf(r), dens});
  }

  if (fmt == "csv") {
    std::string s = "r,cdf,normalized_cdf,density\n";
    for (const auto& row : rows) s += csv_row({row[0], row[1], row[2], row[3]});
    return s;
  }
  json doc;
  doc["config"] = config_json(c, p);
  doc["config"]["window"] = window;
  doc["normalization"] = "cdf is raw mu(D_r); normalized_cdf divides by the closed-window mass";
  doc["window_mass"] = lm.window_mass();
  doc["support"] = {{"inner", lm.support_inner()}, {"outer", nullable(lm.support_outer())}};
  json atoms = json::array();
  const std::vector<Atom> normalized = lm.normalized_atoms();
  for (std::size_t i = 0; i < lm.atoms().size(); ++i) {
    atoms.push_back({{"radius", lm.atoms()[i].radius},
                     {"mass", lm.atoms()[i].mass},
                     {"normalized_mass", normalized[i].mass}});
  }
  doc["atoms"] = atoms;
  json gaps = json::array();
  for (const Gap& g : lm.gaps()) gaps.push_back({{"r_lo", g.r_lo}, {"r_hi", nullable(g.r_hi)}});
  doc["gaps"] = gaps;
  json table = json::array();
  for (const auto& row : rows) {
    table.push_back({{"r", row[0]}, {"cdf", row[1]}, {"normalized_cdf", row[2]},
                     {"density", nullable(row[3])}});
  }
  doc["table"] = table;
  return doc.dump(2) + '\n';
}

std::string cmd_zeros(const RunConfig& c, std::string& violation) {
  check_common(c);
  const RadialProfile p = make_profile(c);
  const double window = window_of(c, p);
  const std::string fmt = format_of(c, "csv");
  const RandomFunctionInstance inst =
      instantiate(coefficients(p, c.n, 0), noise_of(c), c.seed, window);
  const ZeroSet zs = find_roots(inst);
  if (c.check && zs.max_residual() > 1e-10) {
    violation = "max residual " + format_double(zs.max_residual()) + " exceeds 1e-10";
  }
  if (fmt == "csv") return zeros_to_csv(zs);
  json doc;
  doc["config"] = config_json(c, p);
  doc["config"]["window"] = window;
  doc["degree"] = zs.degree;
  doc["origin_multiplicity"] = zs.origin_multiplicity;
  json zeros = json::array();
  for (const Zero& z : zs.zeros) {
    zeros.push_back({{"re", z.z.real()}, {"im", z.z.imag()}, {"multiplicity", z.multiplicity},
                     {"residual", z.residual}});
  }
  doc["zeros"] = zeros;
  return doc.dump(2) + '\n';
}

std::string cmd_compare(const RunConfig& c, std::string& violation) {
  check_common(c);
  const RadialProfile p = make_profile(c);
  const double window = window_of(c, p);
  const std::string fmt = format_of(c, "json");
  CompareConfig cc;
  cc.profile = p;
  cc.n = c.n;
  cc.noise = noise_of(c);
  cc.trials = c.trials;
  cc.window = window;
  cc.base_seed = c.seed;
  cc.threads = c.threads;
  cc.probes = default_probes(LimitMeasure(p, window));
  const ComparisonReport rep = compare_report(cc);

  std::string text;
  if (fmt == "csv") {
    text = "seed,ks_radial,ks_angular,count\n";
    for (const TrialResult& t : rep.per_trial) {
      text += std::to_string(t.seed) + ',' +
              (t.ok ? csv_row({t.ks_radial, t.ks_angular, static_cast<double>(t.count)})
                    : std::string(",,\n"));
    }
  } else {
    json doc;
    doc["config"] = config_json(c, p);
    doc["config"]["window"] = window;
    json trials = json::array();
    for (const TrialResult& t : rep.per_trial) {
      json row = {{"seed", t.seed}};
      if (t.ok) {
        row["ks_radial"] = t.ks_radial;
        row["ks_angular"] = t.ks_angular;
        row["count"] = t.count;
      } else {
        row["ks_radial"] = nullptr;
        row["ks_angular"] = nullptr;
        row["count"] = nullptr;
        row["error"] = t.error;
      }
      trials.push_back(row);
    }
    doc["per_trial"] = trials;
    doc["aggregate"] = {{"mean_ks_radial", rep.mean_ks_radial},
                        {"mean_ks_angular", rep.mean_ks_angular},
                        {"failed_trials", rep.failed_trials()}};
    json pot = json::array();
    for (const PotentialCheck& pc : rep.potential) {
      pot.push_back({{"z_re", pc.z.real()}, {"z_im", pc.z.imag()}, {"p_n_mean", pc.p_n_mean},
                     {"target", pc.target}, {"gap", pc.gap}});
    }
    doc["potential"] = pot;
    text = doc.dump(2) + '\n';
  }
  if (c.check) {
    if (rep.failed_trials() > 0) violation = "some trials failed";
    if (rep.mean_ks_radial > kCompareCheckKs || rep.mean_ks_angular > kCompareCheckKs) {
      violation = "mean KS above " + format_double(kCompareCheckKs);
    }
  }
  return text;
}

std::string cmd_potential(const RunConfig& c, std::string& violation) {
  const RadialProfile p = make_profile(c);
  const std::string fmt = format_of(c, "json");
  const TruncatedLaw tl(p, c.kappa);
  const double outer = tl.outer_radius();
  double top = c.window ? *c.window : std::isfinite(outer) ? 1.5 * outer : default_window(p);
  if (!(top > 0.0) || std::log(top) >= p.log_r0()) {
    throw ConfigError("window must lie inside the radius of convergence");
  }

  constexpr int kProbes = 50;
  std::vector<double> radii;
  for (int i = 1; i <= kProbes; ++i) radii.push_back(top * (i - 0.5) / kProbes);
  // a support circle of zero width is only hit by probing it directly
  if (tl.inner_radius() == outer && outer < top) {
    radii.push_back(outer);
    std::sort(radii.begin(), radii.end());
  }
  std::vector<std::array<double, 3>> table;
  double max_diff = 0.0;
  for (double r : radii) {
    const double closed = equilibrium_potential(tl, r);
    const double quad = potential_quadrature(tl, r);
    max_diff = std::max(max_diff, std::abs(closed - quad));
    table.push_back({r, closed, quad});
  }
  const FlatnessCertificate cert = flatness_certificate(tl, radii);

  std::string text;
  if (fmt == "csv") {
    text = "r,closed,quadrature,F,in_support\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
      text += format_double(table[i][0]) + ',' + format_double(table[i][1]) + ',' +
              format_double(table[i][2]) + ',' + format_double(cert.probes[i].F) + ',' +
              (cert.probes[i].in_support ? "1" : "0") + '\n';
    }
  } else {
    json doc;
    doc["config"] = config_json(c, p);
    doc["config"]["kappa"] = c.kappa;
    doc["support"] = {{"inner", tl.inner_radius()}, {"outer", outer}, {"mass", tl.total_mass()}};
    json rows = json::array();
    for (const auto& row : table) {
      rows.push_back({{"r", row[0]}, {"closed", row[1]}, {"quadrature", row[2]},
                      {"diff", row[1] - row[2]}});
    }
    doc["table"] = rows;
    doc["max_closed_vs_quadrature"] = max_diff;
    json probes = json::array();
    for (const FlatnessProbe& pr : cert.probes) {
      probes.push_back({{"r", pr.r}, {"F", pr.F}, {"in_support", pr.in_support}});
    }
    doc["flatness"] = {{"constant", cert.constant},
                       {"max_deviation", cert.max_deviation},
                       {"min_excess", cert.min_excess},
                       {"probes", probes}};
    text = doc.dump(2) + '\n';
  }
  if (c.check) {
    if (max_diff > kPotentialCheckQuadrature) violation = "closed form and quadrature disagree";
    if (!cert.passes(kPotentialCheckFlatness)) violation = "flatness certificate failed";
  }
  return text;
}

std::string cmd_conjugate(const RunConfig& c, std::string& /*violation*/) {
  const RadialProfile p = make_profile(c);
  const double window = window_of(c, p);
  const std::string fmt = format_of(c, "csv");
  const LimitMeasure lm(p, window);
  const ConjugateProfile& cp = lm.conjugate_profile();
  if (fmt == "csv") {
    std::string s = "s,I,I_prime\n";
    for (std::size_t i = 0; i < cp.s_grid.size(); ++i) {
      s += csv_row({cp.s_grid[i], cp.I_values[i], cp.left_deriv[i]});
    }
    return s;
  }
  json doc;
  doc["config"] = config_json(c, p);
  doc["config"]["window"] = window;
  doc["h"] = cp.h;
  doc["s"] = cp.s_grid;
  doc["I"] = cp.I_values;
  doc["I_prime"] = cp.left_deriv;
  json jumps = json::array();
  for (const Jump& j : cp.jumps) jumps.push_back({{"s", j.s}, {"size", j.size}});
  doc["jumps"] = jumps;
  json flats = json::array();
  for (const Flat& f : cp.flats) {
    flats.push_back({{"s_lo", nullable(f.s_lo)}, {"s_hi", nullable(f.s_hi)}, {"level", f.level}});
  }
  doc["flats"] = flats;
  return doc.dump(2) + '\n';
}

void add_common(CLI::App& sub, RunConfig& c) {
  sub.add_option("--ensemble", c.ensemble, "kac, elliptic, flat, hyperbolic, weyl, theta, three-circles");
  sub.add_option("--alpha", c.alpha, "profile exponent (default 1/2 for weyl, 2 for theta, 1 otherwise)");
  sub.add_option("--beta", c.beta, "profile shift (flat, weyl)");
  sub.add_option("--window", c.window, "window radius");
  sub.add_option("--seed", c.seed, "base seed (default 1729, or $ZERO_ATLAS_SEED)");
  sub.add_option("--out", c.out, "output path, - for stdout");
  sub.add_option("--format", c.format, "json or csv");
}

void add_sampling(CLI::App& sub, RunConfig& c) {
  sub.add_option("--noise", c.noise, "noise distribution");
  sub.add_option("--gamma", c.gamma, "pareto_log tail exponent");
  sub.add_option("--n", c.n, "scaling parameter n");
  sub.add_flag("--check", c.check, "exit 4 when acceptance thresholds are violated");
}

std::uint64_t env_seed() {
  const char* v = std::getenv("ZERO_ATLAS_SEED");
  if (v == nullptr || *v == '\0') return kDefaultSeed;
  std::size_t used = 0;
  std::uint64_t s = 0;
  try {
    s = std::stoull(v, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || v[used] != '\0') throw ConfigError("ZERO_ATLAS_SEED must be an unsigned integer");
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c.seed = env_seed();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigFailure;
  }

  CLI::App app{"Zero distributions of random analytic functions"};
  app.name("zero_atlas");
  app.require_subcommand(1);

  CLI::App* limit = app.add_subcommand("limit", "limit-law report: radial CDF, density, atoms, gaps");
  CLI::App* zeros = app.add_subcommand("zeros", "sample one instance and write its zeros");
  CLI::App* compare = app.add_subcommand("compare", "Monte Carlo comparison against the limit law");
  CLI::App* potential = app.add_subcommand("potential", "equilibrium potential certificate");
  CLI::App* conjugate = app.add_subcommand("conjugate", "tabulate I(s) and I'(s)");
  for (CLI::App* sub : {limit, zeros, compare, potential, conjugate}) add_common(*sub, c);
  add_sampling(*zeros, c);
  add_sampling(*compare, c);
  compare->add_option("--trials", c.trials, "number of trials");
  compare->add_option("--threads", c.threads, "worker threads");
  potential->add_option("--kappa", c.kappa, "truncation level");
  potential->add_flag("--check", c.check, "exit 4 when acceptance thresholds are violated");

  std::vector<const char*> argv{"zero_atlas"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kConfigFailure;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    std::string text;
    std::string violation;
    if (c.subcommand == "limit") text = cmd_limit(c, violation);
    if (c.subcommand == "zeros") text = cmd_zeros(c, violation);
    if (c.subcommand == "compare") text = cmd_compare(c, violation);
    if (c.subcommand == "potential") text = cmd_potential(c, violation);
    if (c.subcommand == "conjugate") text = cmd_conjugate(c, violation);
    if (c.out == "-") {
      out << text;
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file " + c.out);
      f << text;
    }
    if (!violation.empty()) {
      err << "check failed: " << violation << '\n';
      return kCheckFailure;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace zero_atlas::cli
