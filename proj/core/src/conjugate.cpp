#include "zero_atlas/conjugate.hpp"

#include <algorithm>
#include <sstream>

#include "hull.hpp"

namespace zero_atlas {

namespace {

double pl_slope(const RadialProfile& p, std::size_t i) {
  const auto& t = p.grid_t();
  const auto& u = p.grid_u();
  return (u[i + 1] - u[i]) / (t[i + 1] - t[i]);
}

// Smallest t in [0, T0] with du_right(t) >= s (strict: > s), searching
// from lo_hint, which the caller guarantees is not beyond the answer.
double first_crossing(const RadialProfile& p, double s, bool strict, double lo_hint) {
  auto reached = [&](double g) { return strict ? g > s : g >= s; };
  if (p.is_piecewise_linear()) {
    const std::size_t segments = p.grid_t().size() - 1;
    std::size_t lo = 0;
    std::size_t hi = segments;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (reached(pl_slope(p, mid))) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return p.grid_t()[lo];
  }
  double lo = std::max(0.0, lo_hint);
  if (reached(p.du_right(lo))) return lo;
  double hi;
  if (p.is_polynomial()) {
    hi = p.t0();
  } else {
    hi = std::max(1.0, 2.0 * lo);
    while (!reached(p.du_right(hi))) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw NumericalError("conjugate: supremum is unbounded");
    }
  }
  for (;;) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (reached(p.du_right(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

void check_s(const RadialProfile& p, double s) {
  if (!std::isfinite(s)) throw ConfigError("conjugate: s must be finite");
  if (s >= p.log_r0()) throw ConfigError("conjugate: s must be below log R0");
}

double jump_scale_floor(double h) { return 10.0 * h; }

}  // namespace

double conjugate_left_derivative(const RadialProfile& profile, double s) {
  const RadialProfile p = profile.convexified();
  check_s(p, s);
  return first_crossing(p, s, false, 0.0);
}

double conjugate_right_derivative(const RadialProfile& profile, double s) {
  const RadialProfile p = profile.convexified();
  check_s(p, s);
  return first_crossing(p, s, true, 0.0);
}

double conjugate_at(const RadialProfile& profile, double s) {
  const RadialProfile p = profile.convexified();
  check_s(p, s);
  const double t = first_crossing(p, s, false, 0.0);
  return s * t - p.u(t);
}

ConjugateProfile conjugate(const RadialProfile& profile, double s_lo, double s_hi, double h) {
  if (!(h > 0.0)) throw ConfigError("conjugate: h must be positive");
  if (!(s_lo <= s_hi) || !std::isfinite(s_lo) || !std::isfinite(s_hi)) {
    throw ConfigError("conjugate: need finite s_lo <= s_hi");
  }
  ConjugateProfile cp{profile.convexified(), h, {}, {}, {}, {}, {}};
  if (s_hi >= cp.profile.log_r0()) {
    throw ConfigError("conjugate: s range intersects [log R0, inf)");
  }
  const auto cells = static_cast<std::size_t>(std::llround((s_hi - s_lo) / h));
  cp.s_grid.resize(cells + 1);
  cp.I_values.resize(cells + 1);
  cp.left_deriv.resize(cells + 1);
  double t_prev = 0.0;
  for (std::size_t i = 0; i <= cells; ++i) {
    const double s = s_lo + h * static_cast<double>(i);
    const double t = first_crossing(cp.profile, s, false, t_prev);
    cp.s_grid[i] = s;
    cp.left_deriv[i] = t;
    cp.I_values[i] = s * t - cp.profile.u(t);
    t_prev = t;
  }
  left_derivative(cp);
  return cp;
}

void left_derivative(ConjugateProfile& cp) {
  const std::size_t n = cp.s_grid.size();
  if (n == 0 || cp.I_values.size() != n) throw ConfigError("left_derivative: I values missing");
  const double h = cp.h;
  auto& L = cp.left_deriv;
  if (L.size() != n) {
    // finite differences when only I is available
    L.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) L[i] = (cp.I_values[i] - cp.I_values[i - 1]) / h;
    L[0] = n > 1 ? L[1] : 0.0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (L[i] < L[i - 1]) {
      if (L[i] < L[i - 1] - 1e-12 * std::max(1.0, std::abs(L[i - 1]))) {
        throw NumericalError("left_derivative: I' decreases (I not convex)");
      }
      L[i] = L[i - 1];
    }
  }
  cp.jumps.clear();
  cp.flats.clear();

  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) d[i] = L[i] - L[i - 1];

  std::vector<long> jump_in_cell(n, -1);
  for (std::size_t i = 1; i < n; ++i) {
    double smooth = kInf;
    if (i >= 2) smooth = std::min(smooth, d[i - 1]);
    if (i + 1 < n) smooth = std::min(smooth, d[i + 1]);
    if (!std::isfinite(smooth)) smooth = 0.0;
    const double threshold = 10.0 * h * std::max({1.0, std::abs(L[i]), smooth / h});
    if (d[i] <= threshold) continue;

    double lo = cp.s_grid[i - 1];
    double hi = cp.s_grid[i];
    double l_lo = L[i - 1];
    double l_hi = L[i];
    for (int it = 0; it < 200; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const double lm = first_crossing(cp.profile, mid, false, l_lo);
      if (lm - l_lo < 0.5 * (l_hi - l_lo)) {
        lo = mid;
        l_lo = lm;
      } else {
        hi = mid;
        l_hi = lm;
      }
    }
    const double size = l_hi - l_lo;
    if (size < jump_scale_floor(h)) continue;
    jump_in_cell[i] = static_cast<long>(cp.jumps.size());
    cp.jumps.push_back({lo, size});
  }

  const double t0 = cp.profile.t0();
  std::size_t i = 1;
  while (i < n) {
    auto is_flat = [&](std::size_t k) {
      return jump_in_cell[k] < 0 && d[k] <= 1e-12 * std::max(1.0, std::abs(L[k]));
    };
    if (!is_flat(i)) {
      ++i;
      continue;
    }
    const std::size_t a = i - 1;
    std::size_t b = i;
    while (b + 1 < n && is_flat(b + 1)) ++b;
    i = b + 1;
    if (b - a < 2) continue;
    Flat f{cp.s_grid[a], cp.s_grid[b], L[a]};
    if (jump_in_cell[a] >= 0) f.s_lo = cp.jumps[static_cast<std::size_t>(jump_in_cell[a])].s;
    if (b + 1 < n && jump_in_cell[b + 1] >= 0) {
      f.s_hi = cp.jumps[static_cast<std::size_t>(jump_in_cell[b + 1])].s;
    }
    if (a == 0 && f.level == 0.0) f.s_lo = kNegInf;
    if (b + 1 == n && std::isfinite(t0) && f.level >= t0 - 1e-12 * std::max(1.0, t0)) {
      f.s_hi = kInf;
    }
    cp.flats.push_back(f);
  }

  std::vector<double> known;
  if (cp.profile.kind() == ProfileKind::kac) known = {0.0};
  if (cp.profile.kind() == ProfileKind::three_circles) {
    known = {0.0, std::log(2.0), std::log(3.0)};
  }
  for (double s : known) {
    if (s <= cp.s_grid.front() || s > cp.s_grid.back()) continue;
    const bool found = std::any_of(cp.jumps.begin(), cp.jumps.end(),
                                   [&](const Jump& j) { return std::abs(j.s - s) <= 1.01 * h; });
    if (!found) throw NumericalError("left_derivative: grid does not resolve a known jump of I'");
  }
}

RadialProfile convex_hull(const RadialProfile& profile, std::span<const double> t_grid) {
  std::vector<double> t;
  std::vector<double> u;
  for (double tk : t_grid) {
    const double v = profile.u(tk);
    if (!std::isfinite(v)) break;
    t.push_back(tk);
    u.push_back(v);
  }
  if (t.size() < 2) throw ConfigError("convex_hull: fewer than 2 finite samples");
  if (t.front() != 0.0) throw ConfigError("convex_hull: t grid must start at 0");
  const auto idx = detail::lower_hull(t, u);
  std::vector<double> ht;
  std::vector<double> hu;
  for (std::size_t k : idx) {
    ht.push_back(t[k]);
    hu.push_back(u[k]);
  }
  return RadialProfile::from_samples(std::move(ht), std::move(hu));
}

double biconjugate_at(const ConjugateProfile& cp, double t) {
  const auto& L = cp.left_deriv;
  const auto& S = cp.s_grid;
  const auto& I = cp.I_values;
  if (L.empty() || t < L.front() || t > L.back()) return std::numeric_limits<double>::quiet_NaN();
  const auto b = static_cast<std::size_t>(std::lower_bound(L.begin(), L.end(), t) - L.begin());
  if (b == 0) return t * S[0] - I[0];
  const std::size_t a = b - 1;
  const bool jump_in_cell = std::any_of(cp.jumps.begin(), cp.jumps.end(), [&](const Jump& j) {
    return j.s >= S[a] && j.s <= S[b];
  });
  if (jump_in_cell) {
    const double sk_raw = (I[b] - I[a] - L[b] * S[b] + L[a] * S[a]) / (L[a] - L[b]);
    const double sk = std::clamp(sk_raw, S[a], S[b]);
    return t * sk - std::max(I[a] + L[a] * (sk - S[a]), I[b] + L[b] * (sk - S[b]));
  }
  const double hc = S[b] - S[a];
  auto hermite = [&](double s, double& value, double& slope) {
    const double x = (s - S[a]) / hc;
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double h00 = 2 * x3 - 3 * x2 + 1;
    const double h10 = x3 - 2 * x2 + x;
    const double h01 = -2 * x3 + 3 * x2;
    const double h11 = x3 - x2;
    value = h00 * I[a] + h10 * hc * L[a] + h01 * I[b] + h11 * hc * L[b];
    const double d00 = (6 * x2 - 6 * x) / hc;
    const double d10 = 3 * x2 - 4 * x + 1;
    const double d01 = (-6 * x2 + 6 * x) / hc;
    const double d11 = 3 * x2 - 2 * x;
    slope = d00 * I[a] + d10 * L[a] + d01 * I[b] + d11 * L[b];
  };
  double lo = S[a];
  double hi = S[b];
  for (int it = 0; it < 100; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    double v;
    double g;
    hermite(mid, v, g);
    if (g < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double v;
  double g;
  hermite(hi, v, g);
  return t * hi - v;
}

double inverse_left_derivative(const ConjugateProfile& cp, double t) {
  const auto& L = cp.left_deriv;
  const auto it = std::lower_bound(L.begin(), L.end(), t);
  if (it == L.end()) return kInf;
  return cp.s_grid[static_cast<std::size_t>(it - L.begin())];
}

double grid_left_derivative(const ConjugateProfile& cp, double s) {
  const auto& S = cp.s_grid;
  const auto& L = cp.left_deriv;
  if (S.empty()) throw ConfigError("grid_left_derivative: empty grid");
  if (s <= S.front()) return L.front();
  if (s >= S.back()) return L.back();
  const auto b = static_cast<std::size_t>(std::lower_bound(S.begin(), S.end(), s) - S.begin());
  if (S[b] == s) return L[b];
  const std::size_t a = b - 1;
  for (const Jump& j : cp.jumps) {
    if (j.s >= S[a] && j.s <= S[b]) return s <= j.s ? L[a] : L[b];
  }
  const double w = (s - S[a]) / (S[b] - S[a]);
  return L[a] + w * (L[b] - L[a]);
}

std::string serialize_conjugate(const ConjugateProfile& cp) {
  std::ostringstream os;
  os << "# profile " << cp.profile.describe() << '\n';
  os << "# h " << format_double(cp.h) << '\n';
  os << "s I I_prime\n";
  for (std::size_t i = 0; i < cp.s_grid.size(); ++i) {
    os << format_double(cp.s_grid[i]) << ' ' << format_double(cp.I_values[i]) << ' '
       << format_double(cp.left_deriv[i]) << '\n';
  }
  for (const Jump& j : cp.jumps) {
    os << "jump " << format_double(j.s) << ' ' << format_double(j.size) << '\n';
  }
  for (const Flat& f : cp.flats) {
    os << "flat " << format_double(f.s_lo) << ' ' << format_double(f.s_hi) << ' '
       << format_double(f.level) << '\n';
  }
  return os.str();
}

ConjugateTable parse_conjugate(const std::string& text) {
  ConjugateTable table;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "s") {
      header = true;
      continue;
    }
    std::vector<std::string> rest;
    std::string tok;
    while (ls >> tok) rest.push_back(tok);
    if (first == "jump") {
      if (rest.size() != 2) throw ConfigError("conjugate table: malformed jump record");
      table.jumps.push_back({parse_double(rest[0]), parse_double(rest[1])});
    } else if (first == "flat") {
      if (rest.size() != 3) throw ConfigError("conjugate table: malformed flat record");
      table.flats.push_back({parse_double(rest[0]), parse_double(rest[1]), parse_double(rest[2])});
    } else {
      if (!header || rest.size() != 2) throw ConfigError("conjugate table: malformed row");
      table.s.push_back(parse_double(first));
      table.I.push_back(parse_double(rest[0]));
      table.I_prime.push_back(parse_double(rest[1]));
    }
  }
  if (!header) throw ConfigError("conjugate table: missing header");
  return table;
}

}  // namespace zero_atlas
