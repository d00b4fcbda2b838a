#pragma once

#include <span>
#include <string>
#include <vector>

#include "zero_atlas/schedule.hpp"

namespace zero_atlas {

struct Jump {
  double s;
  double size;
};

/// Interval on which I' is constant. s_lo may be -inf (flat at level 0
/// reaching the start of the grid) and s_hi may be +inf (flat at level T0
/// reaching the end of the grid).
struct Flat {
  double s_lo;
  double s_hi;
  double level;
};

/// I(s) = sup_{t>=0} (s t - u(t)) sampled on an s-grid, with the left
/// derivative I' and the jump/flat structure of I'.
struct ConjugateProfile {
  RadialProfile profile;  // convexified input
  double h = 0.0;
  std::vector<double> s_grid;
  std::vector<double> I_values;
  std::vector<double> left_deriv;
  std::vector<Jump> jumps;
  std::vector<Flat> flats;
};

/// I(s) for a single s < log R0.
double conjugate_at(const RadialProfile& profile, double s);

/// Smallest maximizer of s t - u(t), which equals the left derivative I'_-(s).
double conjugate_left_derivative(const RadialProfile& profile, double s);

/// Largest maximizer of s t - u(t), i.e. the right derivative I'_+(s).
double conjugate_right_derivative(const RadialProfile& profile, double s);

/// Throws ConfigError when s_hi >= log R0, h <= 0 or s_lo > s_hi, and
/// NumericalError when the supremum is unbounded.
ConjugateProfile conjugate(const RadialProfile& profile, double s_lo, double s_hi, double h);

/// Recomputes jumps and flats from left_deriv; also used by conjugate().
/// For kac and three_circles the known jump positions inside the grid must
/// be resolved, otherwise NumericalError.
void left_derivative(ConjugateProfile& cp);

/// Greatest convex minorant of u sampled at t_grid (t_grid[0] must be 0).
RadialProfile convex_hull(const RadialProfile& profile, std::span<const double> t_grid);

/// u**(t) = sup_s (t s - I(s)) reconstructed from the grid data alone
/// (cubic Hermite per cell, tangent intersection across jumps). Defined for
/// t in [left_deriv.front(), left_deriv.back()]; NaN outside.
double biconjugate_at(const ConjugateProfile& cp, double t);

/// (I')^{<-}(t) = inf { s_i : I'(s_i) >= t } on the grid; +inf if none.
double inverse_left_derivative(const ConjugateProfile& cp, double t);

/// Grid value of I' at an arbitrary s (left-continuous step lookup).
double grid_left_derivative(const ConjugateProfile& cp, double s);

/// Columnar text: header, rows "s I I_prime", then "jump s size" and
/// "flat s_lo s_hi level" footer records.
std::string serialize_conjugate(const ConjugateProfile& cp);

struct ConjugateTable {
  std::vector<double> s;
  std::vector<double> I;
  std::vector<double> I_prime;
  std::vector<Jump> jumps;
  std::vector<Flat> flats;
};

ConjugateTable parse_conjugate(const std::string& text);

}  // namespace zero_atlas
