#include "zero_atlas/roots.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_complex.hpp>

namespace zero_atlas {

namespace {

using cplx = std::complex<double>;

constexpr double kEps = 2.220446049250313e-16;

// Rescaled polynomial p(w) = sum q_j w^j with z = e^{log_c} w.
struct ScaledPoly {
  std::vector<cplx> q;
  std::vector<double> abs_q;
  std::vector<double> log_q;
  int degree = 0;
  double log_c = 0.0;
};

struct NewtonRatio {
  cplx ratio;      // p(w) / p'(w)
  bool in_noise;   // |p(w)| below its rounding error bound
};

NewtonRatio newton_ratio(const ScaledPoly& P, cplx w) {
  const int D = P.degree;
  const double aw = std::abs(w);
  const double noise = 4.0 * (D + 1) * kEps;
  if (aw <= 1.0) {
    cplx p = P.q[static_cast<std::size_t>(D)];
    cplx dp = 0.0;
    double e = P.abs_q[static_cast<std::size_t>(D)];
    for (int j = D - 1; j >= 0; --j) {
      dp = dp * w + p;
      p = p * w + P.q[static_cast<std::size_t>(j)];
      e = e * aw + P.abs_q[static_cast<std::size_t>(j)];
    }
    const bool quiet = std::abs(p) <= noise * e;
    if (dp == cplx(0.0)) return {cplx(kInf, 0.0), quiet};
    return {p / dp, quiet};
  }
  // p(w) = w^D R(1/w),  p/p' = w R / (D R - y R')
  const cplx y = 1.0 / w;
  const double ay = 1.0 / aw;
  cplx R = P.q[0];
  cplx dR = 0.0;
  double e = P.abs_q[0];
  for (int i = 1; i <= D; ++i) {
    dR = dR * y + R;
    R = R * y + P.q[static_cast<std::size_t>(i)];
    e = e * ay + P.abs_q[static_cast<std::size_t>(i)];
  }
  const bool quiet = std::abs(R) <= noise * e;
  const cplx denom = static_cast<double>(D) * R - y * dR;
  if (denom == cplx(0.0)) return {cplx(kInf, 0.0), quiet};
  return {w * R / denom, quiet};
}

double spread(const std::vector<double>& lm, double x) {
  double hi = kNegInf;
  double lo = kInf;
  for (std::size_t j = 0; j < lm.size(); ++j) {
    if (lm[j] == kNegInf) continue;
    const double v = lm[j] + static_cast<double>(j) * x;
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return hi - lo;
}

ScaledPoly rescale(const std::vector<double>& lm, const std::vector<double>& ph) {
  ScaledPoly P;
  P.degree = static_cast<int>(lm.size()) - 1;
  const double D = P.degree;
  double lm_max = kNegInf;
  double lm_min = kInf;
  for (double v : lm) {
    if (v == kNegInf) continue;
    lm_max = std::max(lm_max, v);
    lm_min = std::min(lm_min, v);
  }
  const double x0 = (lm.front() - lm.back()) / D;
  const double half = (lm_max - lm_min) + 50.0;
  double a = x0 - half;
  double b = x0 + half;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = spread(lm, c);
  double fd = spread(lm, d);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = spread(lm, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = spread(lm, d);
    }
  }
  const double x = 0.5 * (a + b);
  double hi = kNegInf;
  double lo = kInf;
  for (std::size_t j = 0; j < lm.size(); ++j) {
    if (lm[j] == kNegInf) continue;
    const double v = lm[j] + static_cast<double>(j) * x;
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  if (hi - lo > 1400.0) {
    throw NumericalError("find_roots: coefficient dynamic range exceeds double precision range");
  }
  const double centre = 0.5 * (hi + lo);
  P.log_c = x;
  P.q.resize(lm.size());
  P.abs_q.resize(lm.size());
  P.log_q.resize(lm.size());
  for (std::size_t j = 0; j < lm.size(); ++j) {
    if (lm[j] == kNegInf) {
      P.q[j] = 0.0;
      P.abs_q[j] = 0.0;
      P.log_q[j] = kNegInf;
      continue;
    }
    P.log_q[j] = lm[j] + static_cast<double>(j) * x - centre;
    P.abs_q[j] = std::exp(P.log_q[j]);
    P.q[j] = P.abs_q[j] * unit_phase(ph[j]);
  }
  return P;
}

// Circles at the Newton-polygon radii (upper hull of (j, log|q_j|)).
std::vector<cplx> initial_guesses(const ScaledPoly& P) {
  std::vector<int> hull;
  for (int j = 0; j <= P.degree; ++j) {
    const double y = P.log_q[static_cast<std::size_t>(j)];
    if (y == kNegInf) continue;
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull.back();
      const double ya = P.log_q[static_cast<std::size_t>(a)];
      const double yb = P.log_q[static_cast<std::size_t>(b)];
      const double cross = (b - a) * (y - ya) - (j - a) * (yb - ya);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(j);
  }
  std::vector<cplx> w;
  w.reserve(static_cast<std::size_t>(P.degree));
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int a = hull[e];
    const int b = hull[e + 1];
    const int m = b - a;
    const double rho = std::exp((P.log_q[static_cast<std::size_t>(a)] -
                                 P.log_q[static_cast<std::size_t>(b)]) /
                                static_cast<double>(m));
    for (int i = 0; i < m; ++i) {
      const double angle = kTwoPi * i / m + kTwoPi * a / P.degree + 0.7;
      w.push_back(std::polar(rho, angle));
    }
  }
  return w;
}

// A cluster of multiplicity m is a simple zero of G^{(m-1)}.
LogValue derivative_value(const RandomFunctionInstance& inst, cplx z, int order) {
  return order == 0 ? evaluate(inst, z) : evaluate_derivative(inst, z, order);
}

double log_residual(const RandomFunctionInstance& inst, cplx z, int m) {
  const LogValue g = derivative_value(inst, z, m - 1);
  if (g.log_abs == kNegInf) return kNegInf;
  const LogValue gm = evaluate_derivative(inst, z, m);
  if (gm.log_abs == kNegInf) return kInf;
  return g.log_abs - gm.log_abs - std::log(std::abs(z));
}

void polish(const RandomFunctionInstance& inst, Zero& zero, double tol) {
  const int m = zero.multiplicity;
  double lr = log_residual(inst, zero.z, m);
  const double log_tol = std::log(tol);
  for (int it = 0; it < 8 && lr > log_tol; ++it) {
    const LogValue g = derivative_value(inst, zero.z, m - 1);
    const LogValue g1 = evaluate_derivative(inst, zero.z, m);
    if (g.log_abs == kNegInf || g1.log_abs == kNegInf) break;
    const cplx candidate = zero.z - std::polar(std::exp(g.log_abs - g1.log_abs), g.phase - g1.phase);
    const double lc = log_residual(inst, candidate, m);
    if (!(lc < lr)) break;
    zero.z = candidate;
    lr = lc;
  }
  zero.residual = lr == kNegInf ? 0.0 : std::exp(lr);
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

// Relative radius around w inside which rounding hides the sign of p.
double rounding_radius(const ScaledPoly& P, cplx w) {
  const int D = P.degree;
  const double aw = std::abs(w);
  const double noise = 4.0 * (D + 1) * kEps;
  if (aw == 0.0) return kInf;
  if (aw <= 1.0) {
    cplx p = P.q[static_cast<std::size_t>(D)];
    cplx dp = 0.0;
    double e = P.abs_q[static_cast<std::size_t>(D)];
    for (int j = D - 1; j >= 0; --j) {
      dp = dp * w + p;
      p = p * w + P.q[static_cast<std::size_t>(j)];
      e = e * aw + P.abs_q[static_cast<std::size_t>(j)];
    }
    return noise * e / (std::abs(dp) * aw);
  }
  const cplx y = 1.0 / w;
  cplx R = P.q[0];
  cplx dR = 0.0;
  double e = P.abs_q[0];
  for (int i = 1; i <= D; ++i) {
    dR = dR * y + R;
    R = R * y + P.q[static_cast<std::size_t>(i)];
    e = e / aw + P.abs_q[static_cast<std::size_t>(i)];
  }
  return noise * e / std::abs(static_cast<double>(D) * R - y * dR);
}

// Aberth iteration, clustering and polishing carried out with Digits decimal
// digits, for instances whose zeros double precision cannot resolve.
template <unsigned Digits>
std::vector<Zero> extended_roots(const ScaledPoly& P, const std::vector<double>& ph, double window,
                                 const RootOptions& options, bool& resolved, bool& clustered) {
  using C = boost::multiprecision::cpp_complex<Digits>;
  using R = typename C::value_type;
  const int D = P.degree;
  const R eps = pow(R(10), -static_cast<int>(Digits));
  const R noise = 4 * (D + 1) * eps;

  std::vector<C> q(static_cast<std::size_t>(D) + 1);
  std::vector<R> aq(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (P.log_q[j] == kNegInf) continue;
    aq[j] = exp(R(P.log_q[j]));
    q[j] = C(aq[j] * cos(R(ph[j])), aq[j] * sin(R(ph[j])));
  }
  // p^{(k)}(w) / k! from the Taylor shift coefficients
  auto derivative = [&](const C& w, int k) {
    C acc = 0;
    R binom = 1;
    for (int j = D; j >= k; --j) {
      binom = 1;
      for (int i = 0; i < k; ++i) binom = binom * (j - i) / (i + 1);
      acc = acc * w + q[static_cast<std::size_t>(j)] * binom;
    }
    return acc;
  };
  struct Eval {
    C p, dp;
    bool quiet;
  };
  auto eval = [&](const C& w) {
    const R aw = abs(w);
    C p = q[static_cast<std::size_t>(D)];
    C dp = 0;
    R e = aq[static_cast<std::size_t>(D)];
    for (int j = D - 1; j >= 0; --j) {
      dp = dp * w + p;
      p = p * w + q[static_cast<std::size_t>(j)];
      e = e * aw + aq[static_cast<std::size_t>(j)];
    }
    return Eval{p, dp, abs(p) <= noise * e};
  };

  std::vector<C> w;
  for (const cplx& g : initial_guesses(P)) w.emplace_back(R(g.real()), R(g.imag()));
  std::vector<char> done(w.size(), 0);
  const R step_tol = pow(R(10), -static_cast<int>(Digits) + 8);
  for (int iter = 0; iter < options.max_iters; ++iter) {
    bool moving = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (done[i]) continue;
      const Eval ev = eval(w[i]);
      if (ev.quiet || ev.dp == C(0)) {
        done[i] = 1;
        continue;
      }
      moving = true;
      const C ratio = ev.p / ev.dp;
      C s = 0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (j != i && w[i] != w[j]) s += C(1) / (w[i] - w[j]);
      }
      const C step = ratio / (C(1) - ratio * s);
      w[i] -= step;
      if (abs(step) <= step_tol * abs(w[i])) done[i] = 1;
    }
    if (!moving) break;
  }

  // zeros merge when the segment joining them stays where |p| is below the
  // rounding error of the double-precision coefficients (independent
  // relative errors, so the l2 norm of the terms)
  const R coeff_noise = R(4.0 * kEps);
  auto hidden = [&](const C& x) {
    const R ax2 = norm(x);
    C p = q[static_cast<std::size_t>(D)];
    R e2 = aq[static_cast<std::size_t>(D)] * aq[static_cast<std::size_t>(D)];
    for (int j = D - 1; j >= 0; --j) {
      p = p * x + q[static_cast<std::size_t>(j)];
      e2 = e2 * ax2 + aq[static_cast<std::size_t>(j)] * aq[static_cast<std::size_t>(j)];
    }
    return abs(p) <= coeff_noise * sqrt(e2);
  };
  const std::size_t m = w.size();
  std::vector<R> reach(m);
  for (std::size_t i = 0; i < m; ++i) {
    const R ax2 = norm(w[i]);
    C dp = 0;
    C p = q[static_cast<std::size_t>(D)];
    R e2 = aq[static_cast<std::size_t>(D)] * aq[static_cast<std::size_t>(D)];
    for (int j = D - 1; j >= 0; --j) {
      dp = dp * w[i] + p;
      p = p * w[i] + q[static_cast<std::size_t>(j)];
      e2 = e2 * ax2 + aq[static_cast<std::size_t>(j)] * aq[static_cast<std::size_t>(j)];
    }
    reach[i] = dp == C(0) ? R(kInf) : R(D * coeff_noise * sqrt(e2) / abs(dp));
  }
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (abs(w[i] - w[j]) > 2 * (reach[i] + reach[j])) continue;
      bool joined = true;
      for (int k = 1; k < 8 && joined; ++k) joined = hidden(w[i] + (w[j] - w[i]) * R(k) / R(8));
      if (joined) parent[find_root(parent, i)] = find_root(parent, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(m);
  for (std::size_t i = 0; i < m; ++i) groups[find_root(parent, i)].push_back(i);

  const double scale = std::exp(P.log_c);
  const R accept = R(1e-20);
  resolved = true;
  std::vector<Zero> out;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    const int mult = static_cast<int>(g.size());
    if (mult > 1) clustered = true;
    C z = 0;
    for (std::size_t i : g) z += w[i];
    z /= R(mult);
    R res = 0;
    for (int it = 0; it < 20; ++it) {
      const C a = derivative(z, mult - 1);
      const C b = derivative(z, mult);
      if (b == C(0) || abs(z) == 0) break;
      const C step = a / (b * R(mult));  // p^{(m-1)} / p^{(m)} with the 1/k! factors
      res = abs(step) / abs(z);
      if (res <= eps) break;
      z -= step;
    }
    if (mult == 1 && !(res <= accept)) resolved = false;
    Zero zero;
    zero.z = cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())) * scale;
    zero.multiplicity = mult;
    zero.residual = static_cast<double>(res);
    zero.outside_window = std::abs(zero.z) > window * (1.0 + 1e-12);
    out.push_back(zero);
  }
  std::sort(out.begin(), out.end(), [](const Zero& a, const Zero& b) {
    return std::arg(a.z) != std::arg(b.z) ? std::arg(a.z) < std::arg(b.z) : std::abs(a.z) < std::abs(b.z);
  });
  return out;
}

}  // namespace

long ZeroSet::total_multiplicity() const {
  long total = origin_multiplicity;
  for (const Zero& z : zeros) total += z.multiplicity;
  return total;
}

long ZeroSet::outside_count() const {
  long total = 0;
  for (const Zero& z : zeros) {
    if (z.outside_window) total += z.multiplicity;
  }
  return total;
}

long ZeroSet::count_in_disk(double r) const {
  long total = r > 0.0 ? origin_multiplicity : 0;
  for (const Zero& z : zeros) {
    if (std::abs(z.z) < r) total += z.multiplicity;
  }
  return total;
}

double ZeroSet::max_residual() const {
  double m = 0.0;
  for (const Zero& z : zeros) m = std::max(m, z.residual);
  return m;
}

ZeroSet find_roots(const RandomFunctionInstance& inst, const RootOptions& options) {
  const auto& lm_all = inst.log_mag;
  long first = -1;
  long last = -1;
  for (long k = 0; k < static_cast<long>(lm_all.size()); ++k) {
    if (lm_all[static_cast<std::size_t>(k)] == kNegInf) continue;
    if (first < 0) first = k;
    last = k;
  }
  if (first < 0) throw ConfigError("find_roots: identically zero instance");
  if (last < 1) throw ConfigError("find_roots: degree must be >= 1");

  ZeroSet zs;
  zs.degree = last;
  zs.window = inst.window;
  zs.origin_multiplicity = first;
  zs.seed = inst.seed;
  const int D = static_cast<int>(last - first);
  if (D == 0) return zs;

  std::vector<double> lm(lm_all.begin() + first, lm_all.begin() + last + 1);
  std::vector<double> ph(inst.phase.begin() + first, inst.phase.begin() + last + 1);
  const ScaledPoly P = rescale(lm, ph);
  std::vector<cplx> w = initial_guesses(P);
  std::vector<char> done(w.size(), 0);
  const double scale = std::exp(P.log_c);

  bool converged = false;
  for (int iter = 0; iter < options.max_iters && !converged; ++iter) {
    converged = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (done[i]) continue;
      const NewtonRatio nr = newton_ratio(P, w[i]);
      if (nr.in_noise) {
        done[i] = 1;
        continue;
      }
      converged = false;
      cplx s = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (j == i) continue;
        const cplx d = w[i] - w[j];
        const double nd = std::norm(d);
        if (nd > 0.0) s += std::conj(d) / nd;
      }
      cplx step = nr.ratio / (1.0 - nr.ratio * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        step = std::isfinite(nr.ratio.real()) ? nr.ratio : cplx(1e-3 * (std::abs(w[i]) + 1e-3), 0.0);
      }
      w[i] -= step;
      if (std::abs(step) <= 1e-13 * std::abs(w[i])) done[i] = 1;
    }
  }

  if (!converged) {
    // one more sweep decides; anything left is reported as partial
    bool all = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!done[i] && !newton_ratio(P, w[i]).in_noise) all = false;
    }
    if (!all) {
      ZeroSet partial = zs;
      for (const cplx& wi : w) {
        partial.zeros.push_back({wi * scale, 1, kInf, std::abs(wi * scale) > inst.window});
      }
      throw RootFindingError("find_roots: no convergence within max_iters", partial);
    }
  }

  double worst_rounding = 0.0;
  for (const cplx& wi : w) worst_rounding = std::max(worst_rounding, rounding_radius(P, wi));
  if (!(worst_rounding <= options.extended_trigger)) {
    zs.extended_precision = true;
    bool resolved = false;
    bool clustered = false;
    zs.zeros = extended_roots<100>(P, ph, inst.window, options, resolved, clustered);
    if (!resolved) {
      clustered = false;
      zs.zeros = extended_roots<400>(P, ph, inst.window, options, resolved, clustered);
    }
    zs.cluster_diagnostic = clustered && inst.noise.is_continuous();
    return zs;
  }

  // clusters of near-coincident approximations become multiple roots
  const std::size_t m = w.size();
  std::vector<double> rho(m);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx r = newton_ratio(P, w[i]).ratio;
    rho[i] = std::isfinite(std::abs(r)) ? D * std::abs(r) : 0.0;
  }
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  const double base_tol = options.cluster_rel * inst.window / scale;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double reach = std::max(base_tol, 2.0 * (rho[i] + rho[j]));
      if (std::abs(w[i] - w[j]) <= reach) parent[find_root(parent, i)] = find_root(parent, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(m);
  for (std::size_t i = 0; i < m; ++i) groups[find_root(parent, i)].push_back(i);

  for (auto& g : groups) {
    if (g.empty()) continue;
    std::sort(g.begin(), g.end());
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) {
              if (a.empty() != b.empty()) return !a.empty();
              return !a.empty() && a.front() < b.front();
            });
  for (const auto& g : groups) {
    if (g.empty()) continue;
    cplx mean = 0.0;
    for (std::size_t i : g) mean += w[i];
    mean /= static_cast<double>(g.size());
    Zero zero;
    zero.z = mean * scale;
    zero.multiplicity = static_cast<int>(g.size());
    if (g.size() > 1 && inst.noise.is_continuous()) zs.cluster_diagnostic = true;
    zs.zeros.push_back(zero);
  }
  for (Zero& zero : zs.zeros) {
    polish(inst, zero, options.residual_tol);
    zero.outside_window = std::abs(zero.z) > inst.window * (1.0 + 1e-12);
  }
  return zs;
}

DiskCount count_zeros_in_disk(const RandomFunctionInstance& inst, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("count_zeros_in_disk: r must be positive");
  const long degree = static_cast<long>(inst.log_mag.size()) - 1;
  const std::size_t base = static_cast<std::size_t>(std::max<long>(64, 8 * (degree + 1)));
  auto phase_at = [&](double radius, double theta, bool& ok) {
    const LogValue v = evaluate(inst, std::polar(radius, theta));
    if (v.log_abs == kNegInf) ok = false;
    return v.phase;
  };
  auto wrap = [](double d) {
    while (d > kPi) d -= kTwoPi;
    while (d <= -kPi) d += kTwoPi;
    return d;
  };
  const double jitters[] = {0.0, 1e-3, -1e-3, 2.3e-3, -2.3e-3, 4.1e-3, -4.1e-3};
  for (double jit : jitters) {
    const double radius = r * (1.0 + jit);
    bool ok = true;
    double total = 0.0;
    std::vector<double> theta(base + 1);
    std::vector<double> arg(base + 1);
    for (std::size_t i = 0; i <= base; ++i) {
      theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(base);
      arg[i] = i == base ? arg[0] : phase_at(radius, theta[i], ok);
    }
    // explicit stack of intervals to refine
    struct Cell {
      double ta, tb, aa, ab;
      int depth;
    };
    for (std::size_t i = 0; i < base && ok; ++i) {
      std::vector<Cell> stack{{theta[i], theta[i + 1], arg[i], arg[i + 1], 0}};
      while (!stack.empty() && ok) {
        const Cell c = stack.back();
        stack.pop_back();
        const double tm = 0.5 * (c.ta + c.tb);
        const double am = phase_at(radius, tm, ok);
        const double d = wrap(c.ab - c.aa);
        const double d1 = wrap(am - c.aa);
        const double d2 = wrap(c.ab - am);
        if (std::abs(d) <= kPi / 4.0 && std::abs(d1 + d2 - d) < 1e-6) {
          total += d;
          continue;
        }
        if (c.depth >= 40) {
          ok = false;
          break;
        }
        stack.push_back({tm, c.tb, am, c.ab, c.depth + 1});
        stack.push_back({c.ta, tm, c.aa, am, c.depth + 1});
      }
    }
    if (!ok) continue;
    const double winding = total / kTwoPi;
    const double nearest = std::round(winding);
    if (std::abs(winding - nearest) < 0.1) return {static_cast<long>(nearest), radius};
  }
  throw NumericalError("count_zeros_in_disk: circle passes through a zero (non-integral winding)");
}

std::string zeros_to_csv(const ZeroSet& zs) {
  std::ostringstream os;
  os << "# degree=" << zs.degree << ",window=" << format_double(zs.window)
     << ",origin_multiplicity=" << zs.origin_multiplicity << ",seed=" << zs.seed << '\n';
  os << "re,im,multiplicity,residual\n";
  for (const Zero& z : zs.zeros) {
    os << format_double(z.z.real()) << ',' << format_double(z.z.imag()) << ',' << z.multiplicity
       << ',' << format_double(z.residual) << '\n';
  }
  return os.str();
}

ZeroSet zeros_from_csv(const std::string& text) {
  ZeroSet zs;
  std::istringstream is(text);
  std::string line;
  bool meta = false;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::istringstream fs(body);
      std::string field;
      while (std::getline(fs, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ConfigError("zeros csv: malformed header field");
        std::string key = field.substr(0, eq);
        key.erase(0, key.find_first_not_of(' '));
        const std::string value = field.substr(eq + 1);
        if (key == "degree") zs.degree = std::stol(value);
        else if (key == "window") zs.window = parse_double(value);
        else if (key == "origin_multiplicity") zs.origin_multiplicity = std::stol(value);
        else if (key == "seed") zs.seed = std::stoull(value);
        else throw ConfigError("zeros csv: unknown header field '" + key + "'");
      }
      meta = true;
      continue;
    }
    if (line == "re,im,multiplicity,residual") {
      header = true;
      continue;
    }
    if (!header) throw ConfigError("zeros csv: missing column header");
    std::istringstream rs(line);
    std::string re;
    std::string im;
    std::string mult;
    std::string res;
    if (!std::getline(rs, re, ',') || !std::getline(rs, im, ',') || !std::getline(rs, mult, ',') ||
        !std::getline(rs, res, ',')) {
      throw ConfigError("zeros csv: malformed row");
    }
    Zero z;
    z.z = {parse_double(re), parse_double(im)};
    z.multiplicity = std::stoi(mult);
    z.residual = parse_double(res);
    z.outside_window = std::abs(z.z) > zs.window * (1.0 + 1e-12);
    zs.zeros.push_back(z);
  }
  if (!meta || !header) throw ConfigError("zeros csv: missing header");
  return zs;
}

}  // namespace zero_atlas
