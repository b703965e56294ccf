#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace msf {

/// Open interval of the real line; endpoints may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval all() { return {}; }
  static Interval positive() { return {0.0, std::numeric_limits<double>::infinity()}; }

  bool contains(double r) const { return r > lo && r < hi; }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  double width() const { return hi - lo; }

  Interval intersect(const Interval& o) const {
    return {std::max(lo, o.lo), std::min(hi, o.hi)};
  }
  bool empty() const { return !(lo < hi); }

  /// Finite sub-interval usable for sampling: infinite ends are clamped to
  /// +-halfw (anchored at a finite end when one exists), finite open ends
  /// are inset by `pad`.
  Interval finite_window(double halfw = 6.0, double pad = 0.25) const {
    double a = lo, b = hi;
    if (!std::isfinite(a) && !std::isfinite(b)) return {-halfw, halfw};
    if (std::isfinite(a) && !std::isfinite(b)) return {a + pad, a + pad + 2 * halfw};
    if (!std::isfinite(a) && std::isfinite(b)) return {b - pad - 2 * halfw, b - pad};
    double inset = std::min(pad, 1e-3 * (b - a));
    return {a + inset, b - inset};
  }
};

}  // namespace msf
