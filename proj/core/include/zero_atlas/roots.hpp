#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "zero_atlas/sampler.hpp"

namespace zero_atlas {

struct Zero {
  std::complex<double> z;
  int multiplicity = 1;
  /// Relative Newton residual |G/G'| / |z|; for multiplicity m the same
  /// quantity for G^{(m-1)}, which has a simple zero there. Evaluated in
  /// the working precision of the zero set.
  double residual = 0.0;
  bool outside_window = false;
};

struct ZeroSet {
  std::vector<Zero> zeros;
  long degree = 0;
  double window = 0.0;
  long origin_multiplicity = 0;
  std::uint64_t seed = 0;
  /// Set when continuous noise produced a cluster of size > 1.
  bool cluster_diagnostic = false;
  /// Set when the zeros were resolved in extended precision.
  bool extended_precision = false;

  /// Nonzero roots with multiplicity plus origin_multiplicity.
  long total_multiplicity() const;
  long outside_count() const;
  /// Zeros (with multiplicity, origin included) in the open disk |z| < r.
  long count_in_disk(double r) const;
  double max_residual() const;
};

struct RootOptions {
  int max_iters = 500;
  double residual_tol = 1e-10;
  /// Cluster distance as a fraction of the window radius.
  double cluster_rel = 1e-8;
  /// Largest relative rounding radius of a double-precision zero; beyond it
  /// the instance is redone with 100 (then 400) decimal digits.
  double extended_trigger = 1e-8;
};

/// Aberth iteration did not converge; carries the partial zero set.
class RootFindingError : public NumericalError {
 public:
  RootFindingError(const std::string& what, ZeroSet partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const ZeroSet& partial() const { return partial_; }

 private:
  ZeroSet partial_;
};

/// All zeros of the (truncated) instance. Throws ConfigError for degree 0 or
/// an identically zero instance, RootFindingError on non-convergence.
ZeroSet find_roots(const RandomFunctionInstance& inst, const RootOptions& options = {});

struct DiskCount {
  long count;
  double radius_used;
};

/// Winding number of G along |z| = r by adaptive phase tracking; retries
/// with jittered radii when the circle passes too close to a zero.
DiskCount count_zeros_in_disk(const RandomFunctionInstance& inst, double r);

/// CSV: "# degree=..,window=..,origin_multiplicity=..,seed=.." then
/// "re,im,multiplicity,residual" rows.
std::string zeros_to_csv(const ZeroSet& zs);
ZeroSet zeros_from_csv(const std::string& text);

}  // namespace zero_atlas
