#include "zero_atlas/schedule.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "hull.hpp"

namespace zero_atlas {

namespace {

constexpr double kSlopeTol = 1e-12;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '-') c = '_';
  }
  return out;
}

double theta_sign(double alpha) { return alpha > 1.0 ? 1.0 : -1.0; }

}  // namespace

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kac: return "kac";
    case ProfileKind::elliptic: return "elliptic";
    case ProfileKind::flat: return "flat";
    case ProfileKind::hyperbolic: return "hyperbolic";
    case ProfileKind::lo_poly: return "lo_poly";
    case ProfileKind::theta: return "theta";
    case ProfileKind::three_circles: return "three_circles";
    case ProfileKind::custom: return "custom";
  }
  return "custom";
}

ProfileKind parse_profile_kind(std::string_view name) {
  const std::string n = lower(name);
  if (n == "kac") return ProfileKind::kac;
  if (n == "elliptic") return ProfileKind::elliptic;
  if (n == "flat") return ProfileKind::flat;
  if (n == "hyperbolic") return ProfileKind::hyperbolic;
  if (n == "lo_poly" || n == "weyl") return ProfileKind::lo_poly;
  if (n == "theta") return ProfileKind::theta;
  if (n == "three_circles") return ProfileKind::three_circles;
  if (n == "custom") return ProfileKind::custom;
  throw ConfigError("unknown ensemble kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile RadialProfile::named(ProfileKind kind, double alpha, double beta) {
  if (kind == ProfileKind::custom) {
    throw ConfigError("named profile: use from_samples for custom profiles");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("named profile: alpha must be a finite positive number");
  }
  if (!std::isfinite(beta)) throw ConfigError("named profile: beta must be finite");
  if (kind == ProfileKind::theta && alpha == 1.0) {
    throw ConfigError("theta profile: alpha must lie in (0,1) or (1,inf)");
  }
  RadialProfile p;
  p.kind_ = kind;
  p.alpha_ = alpha;
  p.beta_ = (kind == ProfileKind::flat || kind == ProfileKind::lo_poly) ? beta : 0.0;
  if (kind == ProfileKind::three_circles) {
    p.grid_t_ = {0.0, 1.0, 2.0, 3.0};
    p.grid_u_ = {0.0, 0.0, std::log(2.0), std::log(6.0)};
  }
  p.t0_ = p.natural_t0();
  return p;
}

RadialProfile RadialProfile::from_samples(std::vector<double> t, std::vector<double> u,
                                          std::optional<double> t0) {
  if (t.size() != u.size()) throw ConfigError("profile grid: t and u sizes differ");
  if (t.size() < 2) throw ConfigError("profile grid: need at least two nodes");
  if (t.front() != 0.0) throw ConfigError("profile grid: t must start at 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(u[i])) {
      throw ConfigError("profile grid: non-finite node");
    }
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw ConfigError("profile grid: t must be strictly increasing");
    }
  }
  RadialProfile p;
  p.kind_ = ProfileKind::custom;
  p.grid_t_ = std::move(t);
  p.grid_u_ = std::move(u);
  p.t0_ = p.grid_t_.back();
  if (t0) {
    if (!(*t0 > 0.0) || *t0 > p.t0_) {
      throw ConfigError("profile grid: t0 must lie in (0, last node]");
    }
    if (*t0 < p.t0_) return p.truncated(*t0);
  }
  return p;
}

double RadialProfile::natural_t0() const {
  switch (kind_) {
    case ProfileKind::kac:
    case ProfileKind::elliptic:
    case ProfileKind::lo_poly: return 1.0;
    case ProfileKind::three_circles: return 3.0;
    case ProfileKind::flat:
    case ProfileKind::hyperbolic:
    case ProfileKind::theta: return kInf;
    case ProfileKind::custom: return grid_t_.empty() ? kInf : grid_t_.back();
  }
  return kInf;
}

double RadialProfile::r0() const { return std::exp(log_r0()); }

double RadialProfile::log_r0() const {
  if (std::isfinite(t0_)) return kInf;
  switch (kind_) {
    case ProfileKind::hyperbolic: return 0.0;
    case ProfileKind::theta: return alpha_ < 1.0 ? 0.0 : kInf;
    default: return kInf;
  }
}

std::size_t RadialProfile::segment_right(double t) const {
  // index i with grid_t_[i] <= t < grid_t_[i+1], clamped to the last segment
  const auto it = std::upper_bound(grid_t_.begin(), grid_t_.end(), t);
  std::size_t i = it == grid_t_.begin() ? 0 : static_cast<std::size_t>(it - grid_t_.begin()) - 1;
  return std::min(i, grid_t_.size() - 2);
}

double RadialProfile::u(double t) const {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (t < 0.0 || t > t0_) return kInf;
  if (is_piecewise_linear()) {
    const std::size_t i = segment_right(t);
    const double t_a = grid_t_[i];
    const double t_b = grid_t_[i + 1];
    const double w = (t - t_a) / (t_b - t_a);
    return grid_u_[i] + w * (grid_u_[i + 1] - grid_u_[i]);
  }
  switch (kind_) {
    case ProfileKind::kac: return 0.0;
    case ProfileKind::elliptic: return alpha_ * (xlogx(t) + xlogx(1.0 - t));
    case ProfileKind::flat:
    case ProfileKind::lo_poly: return alpha_ * (xlogx(t) - t) + beta_ * t;
    case ProfileKind::hyperbolic: return alpha_ * (xlogx(t) - xlogx(1.0 + t));
    case ProfileKind::theta: return theta_sign(alpha_) * std::pow(t, alpha_);
    default: break;
  }
  throw NumericalError("profile: no closed form for kind");
}

double RadialProfile::du_right(double t) const {
  if (t < 0.0) t = 0.0;
  if (t >= t0_) return kInf;
  if (is_piecewise_linear()) {
    const std::size_t i = segment_right(t);
    return (grid_u_[i + 1] - grid_u_[i]) / (grid_t_[i + 1] - grid_t_[i]);
  }
  switch (kind_) {
    case ProfileKind::kac: return 0.0;
    case ProfileKind::elliptic: return alpha_ * (std::log(t) - std::log1p(-t));
    case ProfileKind::flat:
    case ProfileKind::lo_poly: return alpha_ * std::log(t) + beta_;
    case ProfileKind::hyperbolic: return alpha_ * (std::log(t) - std::log1p(t));
    case ProfileKind::theta: {
      if (t == 0.0) return alpha_ > 1.0 ? 0.0 : kNegInf;
      return theta_sign(alpha_) * alpha_ * std::pow(t, alpha_ - 1.0);
    }
    default: break;
  }
  throw NumericalError("profile: no closed form for kind");
}

double RadialProfile::du_left(double t) const {
  if (t <= 0.0) return du_right(0.0);
  if (t > t0_) return kInf;
  if (is_piecewise_linear()) {
    // segment (t_{i-1}, t_i] containing t
    const auto it = std::lower_bound(grid_t_.begin(), grid_t_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - grid_t_.begin());
    i = std::clamp<std::size_t>(i, 1, grid_t_.size() - 1);
    return (grid_u_[i] - grid_u_[i - 1]) / (grid_t_[i] - grid_t_[i - 1]);
  }
  if (t == t0_) {
    // closed forms are smooth up to T0; evaluate the limit from the left
    switch (kind_) {
      case ProfileKind::kac: return 0.0;
      case ProfileKind::elliptic: return t >= 1.0 ? kInf : alpha_ * (std::log(t) - std::log1p(-t));
      case ProfileKind::flat:
      case ProfileKind::lo_poly: return alpha_ * std::log(t) + beta_;
      case ProfileKind::hyperbolic: return alpha_ * (std::log(t) - std::log1p(t));
      case ProfileKind::theta: return theta_sign(alpha_) * alpha_ * std::pow(t, alpha_ - 1.0);
      default: break;
    }
  }
  return du_right(t);
}

RadialProfile RadialProfile::truncated(double kappa) const {
  if (!(kappa > 0.0) || !(kappa < t0_)) {
    throw ConfigError("truncation: kappa must lie in (0, T0)");
  }
  RadialProfile p = *this;
  p.t0_ = kappa;
  if (is_piecewise_linear()) {
    std::vector<double> t;
    std::vector<double> u;
    for (std::size_t i = 0; i < grid_t_.size() && grid_t_[i] < kappa; ++i) {
      t.push_back(grid_t_[i]);
      u.push_back(grid_u_[i]);
    }
    t.push_back(kappa);
    u.push_back(this->u(kappa));
    p.grid_t_ = std::move(t);
    p.grid_u_ = std::move(u);
  }
  return p;
}

bool RadialProfile::is_convex() const {
  if (!is_piecewise_linear()) return true;
  double prev = kNegInf;
  for (std::size_t i = 0; i + 1 < grid_t_.size(); ++i) {
    const double slope = (grid_u_[i + 1] - grid_u_[i]) / (grid_t_[i + 1] - grid_t_[i]);
    if (slope < prev - kSlopeTol * std::max(1.0, std::abs(prev))) return false;
    prev = slope;
  }
  return true;
}

RadialProfile RadialProfile::convexified() const {
  if (is_convex()) return *this;
  const auto idx = detail::lower_hull(grid_t_, grid_u_);
  std::vector<double> t;
  std::vector<double> u;
  for (std::size_t i : idx) {
    t.push_back(grid_t_[i]);
    u.push_back(grid_u_[i]);
  }
  RadialProfile p = *this;
  p.kind_ = ProfileKind::custom;
  p.grid_t_ = std::move(t);
  p.grid_u_ = std::move(u);
  return p;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == ProfileKind::custom) {
    os << "(nodes=" << grid_t_.size() << ",t0=" << format_double(t0_) << ")";
    return os.str();
  }
  os << "(alpha=" << format_double(alpha_);
  if (kind_ == ProfileKind::flat || kind_ == ProfileKind::lo_poly) {
    os << ",beta=" << format_double(beta_);
  }
  if (t0_ != natural_t0()) os << ",t0=" << format_double(t0_);
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Coefficient schedules

CoefficientSchedule::CoefficientSchedule(long n, std::vector<double> log_mag,
                                         std::vector<double> phase,
                                         std::optional<long> degree_hint,
                                         std::optional<RadialProfile> profile)
    : n_(n),
      log_mag_(std::move(log_mag)),
      phase_(std::move(phase)),
      degree_hint_(degree_hint),
      profile_(std::move(profile)) {
  if (n_ < 1) throw ConfigError("schedule: n must be >= 1");
  if (phase_.size() != log_mag_.size()) throw ConfigError("schedule: phase/log_mag size mismatch");
}

double CoefficientSchedule::log_mag(long k) const {
  if (k < 0) return kNegInf;
  if (degree_hint_ && k > *degree_hint_) return kNegInf;
  if (k < cached_size()) return log_mag_[static_cast<std::size_t>(k)];
  if (profile_) return log_coefficient(*profile_, n_, k);
  return kNegInf;
}

double CoefficientSchedule::phase(long k) const {
  if (k >= 0 && k < cached_size()) return phase_[static_cast<std::size_t>(k)];
  return 0.0;
}

std::string CoefficientSchedule::id() const {
  const std::string base = profile_ ? profile_->describe() : std::string("explicit");
  return base + "@n=" + std::to_string(n_);
}

double log_coefficient(const RadialProfile& profile, long n, long k) {
  if (k < 0) throw ConfigError("coefficient index must be >= 0");
  if (k > kMaxScheduleTerms) throw ConfigError("coefficient index exceeds schedule capacity");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  if (profile.is_polynomial()) {
    const long degree = static_cast<long>(std::floor(profile.t0() * nd + 1e-9));
    if (k > degree) return kNegInf;
  }
  const double a = profile.alpha();
  switch (profile.kind()) {
    case ProfileKind::kac: return 0.0;
    case ProfileKind::elliptic:
      return a * (log_factorial(n) - log_factorial(k) - log_factorial(n - k));
    case ProfileKind::flat:
    case ProfileKind::lo_poly:
      return a * (kd * std::log(nd) - log_factorial(k)) - profile.beta() * kd;
    case ProfileKind::hyperbolic:
      return a * (std::lgamma(nd + kd) - std::lgamma(nd) - log_factorial(k));
    case ProfileKind::theta:
      return -theta_sign(a) * std::pow(nd, 1.0 - a) * std::pow(kd, a);
    case ProfileKind::three_circles:
    case ProfileKind::custom: {
      const double v = -nd * profile.u(kd / nd);
      if (std::isnan(v)) throw ConfigError("schedule: profile undefined at k/n");
      return v;
    }
  }
  return kNegInf;
}

CoefficientSchedule coefficients(const RadialProfile& profile, long n, long k_max) {
  if (n < 1) throw ConfigError("coefficients: n must be >= 1");
  if (k_max < 0) throw ConfigError("coefficients: k_max must be >= 0");
  if (k_max > kMaxScheduleTerms) throw ConfigError("coefficients: k_max exceeds schedule capacity");
  std::optional<long> degree;
  if (profile.is_polynomial()) {
    degree = static_cast<long>(std::floor(profile.t0() * static_cast<double>(n) + 1e-9));
    k_max = std::min(k_max, *degree);
  }
  std::vector<double> lm(static_cast<std::size_t>(k_max) + 1);
  for (long k = 0; k <= k_max; ++k) {
    const double v = log_coefficient(profile, n, k);
    if (std::isnan(v) || v == kInf) throw ConfigError("coefficients: profile undefined at k/n < T0");
    lm[static_cast<std::size_t>(k)] = v;
  }
  std::vector<double> ph(lm.size(), 0.0);
  return CoefficientSchedule(n, std::move(lm), std::move(ph), degree, profile);
}

CoefficientSchedule explicit_schedule(std::span<const double> log_mag, std::span<const double> phase,
                                      long n) {
  if (log_mag.size() != phase.size()) throw ConfigError("explicit schedule: size mismatch");
  if (log_mag.empty()) throw ConfigError("explicit schedule: no coefficients");
  long degree = -1;
  for (std::size_t k = 0; k < log_mag.size(); ++k) {
    if (std::isnan(log_mag[k]) || log_mag[k] == kInf) {
      throw ConfigError("explicit schedule: invalid coefficient magnitude");
    }
    if (log_mag[k] > kNegInf) degree = static_cast<long>(k);
  }
  if (degree < 0) throw ConfigError("explicit schedule: all coefficients are zero");
  return CoefficientSchedule(n, {log_mag.begin(), log_mag.end()}, {phase.begin(), phase.end()},
                             degree);
}

// ---------------------------------------------------------------------------
// measure -> profile

RadialProfile measure_to_profile(const std::function<double(double)>& radial_cdf, double r0,
                                 const MeasureToProfileOptions& options) {
  if (!(r0 > 0.0)) throw ConfigError("measure_to_profile: R0 must be positive");
  if (!(options.r_min > 0.0) || !(options.h > 0.0) || options.t_points < 3) {
    throw ConfigError("measure_to_profile: invalid options");
  }
  const double r_max =
      options.r_max.value_or(std::isfinite(r0) ? r0 * (1.0 - 1e-9) : 1e3);
  if (!(r_max > options.r_min) || r_max >= r0) {
    throw ConfigError("measure_to_profile: need r_min < r_max < R0");
  }
  const double s_min = std::log(options.r_min);
  const double s_max = std::log(r_max);
  const auto cells = static_cast<std::size_t>(std::ceil((s_max - s_min) / options.h));
  const double h = (s_max - s_min) / static_cast<double>(cells);

  std::vector<double> s(cells + 1);
  std::vector<double> f(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    s[i] = s_min + h * static_cast<double>(i);
    f[i] = radial_cdf(std::exp(s[i]));
    if (!std::isfinite(f[i]) || f[i] < 0.0) {
      throw ConfigError("measure_to_profile: F must be finite and nonnegative");
    }
    if (i > 0 && f[i] < f[i - 1] - 1e-12) {
      throw ConfigError("measure_to_profile: F is decreasing somewhere");
    }
  }
  const double total = f.back();
  if (!(total > 0.0)) throw ConfigError("measure_to_profile: measure has no mass (u = +inf)");

  // Mass near the origin: int_{-inf}^{s_min} F(e^x) dx must be negligible,
  // otherwise int_0 F(r)/r dr diverges or the reconstruction window is too small.
  {
    const double probe_lo = radial_cdf(options.r_min * 1e-12);
    const double tail_bound = f.front() * 30.0;
    if (probe_lo > 0.5 * f.front() && f.front() > 1e-9) {
      throw ConfigError("measure_to_profile: divergent near-zero integral of F(r)/r");
    }
    if (tail_bound > 1e-3 * total) {
      throw ConfigError("measure_to_profile: non-negligible mass below r_min");
    }
  }

  // I(s) by trapezoid cumulative integration, I(s_min) ~ 0.
  std::vector<double> big_i(cells + 1, 0.0);
  for (std::size_t i = 1; i <= cells; ++i) {
    big_i[i] = big_i[i - 1] + 0.5 * h * (f[i] + f[i - 1]);
  }

  // u(t) = sup_s (s t - I(s)): walk the lower hull of (s_i, I_i).
  const auto hull = detail::lower_hull(s, big_i);
  std::vector<double> t(options.t_points);
  std::vector<double> u(options.t_points);
  std::size_t j = 0;
  for (std::size_t m = 0; m < options.t_points; ++m) {
    const double tm = total * static_cast<double>(m) / static_cast<double>(options.t_points - 1);
    while (j + 1 < hull.size()) {
      const std::size_t a = hull[j];
      const std::size_t b = hull[j + 1];
      const double slope = (big_i[b] - big_i[a]) / (s[b] - s[a]);
      if (slope < tm) {
        ++j;
      } else {
        break;
      }
    }
    const std::size_t best = hull[j];
    t[m] = tm;
    u[m] = s[best] * tm - big_i[best];
  }
  // u(0) = -inf I = 0 exactly
  u[0] = 0.0;
  return RadialProfile::from_samples(std::move(t), std::move(u));
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_profile(const RadialProfile& profile) {
  std::ostringstream os;
  os << "kind = " << to_string(profile.kind()) << '\n';
  os << "alpha = " << format_double(profile.alpha()) << '\n';
  os << "beta = " << format_double(profile.beta()) << '\n';
  os << "t0 = " << format_double(profile.t0()) << '\n';
  os << "r0 = " << format_double(profile.r0()) << '\n';
  if (profile.kind() == ProfileKind::custom) {
    os << "t =";
    for (double v : profile.grid_t()) os << ' ' << format_double(v);
    os << "\nu =";
    for (double v : profile.grid_u()) os << ' ' << format_double(v);
    os << '\n';
  }
  return os.str();
}

RadialProfile parse_profile(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("profile document: expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("profile document: missing key '" + key + "'");
    return it->second;
  };
  auto numbers = [](const std::string& s) {
    std::vector<double> out;
    std::istringstream ns(s);
    std::string tok;
    while (ns >> tok) out.push_back(parse_double(tok));
    return out;
  };
  const ProfileKind kind = parse_profile_kind(need("kind"));
  const double t0 = parse_double(need("t0"));
  RadialProfile p = [&] {
    if (kind == ProfileKind::custom) {
      return RadialProfile::from_samples(numbers(need("t")), numbers(need("u")), t0);
    }
    RadialProfile named =
        RadialProfile::named(kind, parse_double(need("alpha")), parse_double(need("beta")));
    if (t0 < named.t0()) return named.truncated(t0);
    return named;
  }();
  if (kv.count("r0") && parse_double(kv["r0"]) != p.r0()) {
    throw ConfigError("profile document: r0 inconsistent with kind");
  }
  return p;
}

}  // namespace zero_atlas
