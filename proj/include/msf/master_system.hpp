#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msf/interval.hpp"
#include "msf/smooth_fn.hpp"

namespace msf {

enum class WeightKind { Gaussian, PowerExponential };

/// How the family's parameters move one step up the partner chain.
enum class ShiftRule { None, Unchanged, AlphaPlusOne };

/// A quadratic master polynomial A(x), a weight w(x) on an interval, the
/// (alpha, beta) parameters and a fixed sector index m. Together these
/// generate one exactly solvable Schrodinger problem.
struct MasterSystem {
  std::string family;  // catalog name, or "generic"
  std::array<double, 3> A{1.0, 0.0, 0.0};
  WeightKind weight = WeightKind::Gaussian;
  Interval x_interval = Interval::all();
  double alpha = 0.0;
  double beta = 1.0;
  int m = 0;
  ShiftRule shift = ShiftRule::None;

  bool is_catalog() const { return shift != ShiftRule::None; }
  double sigma() const;          // 1/sqrt(beta), the family's length scale
  Interval r_domain() const;
  Interval sample_window() const;
};

/// Families: "oscillator-like" (A = 1), "radial-oscillator-like" (A = x),
/// "shifted-oscillator" (alias of oscillator-like with beta = omega,
/// alpha = b). Throws on unknown names or parameter-constraint violations.
MasterSystem catalog_lookup(const std::string& name, double alpha, double beta,
                            int m = 0);

/// Non-catalog escape hatch: arbitrary quadratic A paired with a catalog
/// weight kind. Shape-invariance shift and ladder spacing stay undefined.
MasterSystem make_generic_system(std::array<double, 3> A, WeightKind weight,
                                 Interval x_interval, double alpha, double beta,
                                 int m);

struct ChangeOfVariable {
  SmoothFn x_of_r;
  Interval r_domain;
};

/// The map x(r) with dx/dr = sqrt(A(x)). Closed form for the catalog
/// entries; monotone inversion of the separable quadrature for generic A.
ChangeOfVariable change_of_variable(const MasterSystem& sys);

struct SuperpotentialProfile {
  SmoothFn W;
  int m = 0;
  MasterSystem system;
};

/// W(r) = -[A w'/(2w) + ((2m-1)/4) A'] / sqrt(A), composed with x(r).
SuperpotentialProfile superpotential(const MasterSystem& sys);

/// The shape-invariant potential of the sector, as a function of r.
/// Identically equal to W^2 + W' (the module's master invariant).
SmoothFn potential_vm(const MasterSystem& sys);

/// (v1, v2) = (W^2 + W', W^2 - W').
std::pair<SmoothFn, SmoothFn> partner_potentials(const SuperpotentialProfile& prof);

/// E(n, m) = -(n-m+1) [ (A w'/w)' + (n+m)/2 A'' ]; the bracket is evaluated
/// symbolically in x and asserted constant (non-constant brackets are an
/// error, not averaged).
double energy(const MasterSystem& sys, int n, int m);

struct ShapeInvariance {
  bool invariant = false;
  double R = 0.0;
  double stddev = 0.0;
};

/// v1(r; a0) - v2(r; a1) sampled on a 256-point grid; invariant iff the
/// standard deviation is below 1e-9 (1 + |mean|), R = mean.
ShapeInvariance shape_invariance_check(const MasterSystem& sys);
ShapeInvariance shape_invariance_check(const MasterSystem& sys,
                                       const MasterSystem& shifted);

/// Equidistant level spacing E(n+1,m) - E(n,m); catalog entries only.
double ladder_spacing(const MasterSystem& sys);

/// Parameters moved one step up the chain per the catalog shift rule.
MasterSystem apply_shift(const MasterSystem& sys);

}  // namespace msf
