#include "msf/master_system.hpp"

#include <cmath>
#include <numeric>

#include "msf/errors.hpp"
#include "msf/quadrature.hpp"

namespace msf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_params(const std::string& family, WeightKind weight, double alpha,
                     double beta, int m) {
  if (!(beta > 0.0))
    throw ConfigError(family + ": beta must be positive (got " + std::to_string(beta) + ")");
  if (weight == WeightKind::PowerExponential && !(alpha > -1.0))
    throw ConfigError(family + ": alpha must exceed -1 (got " + std::to_string(alpha) + ")");
  if (m < 0) throw ConfigError(family + ": sector index m must be non-negative");
}

// w'(x)/w(x) as a node in x.
SmoothFn weight_log_derivative(const MasterSystem& sys) {
  switch (sys.weight) {
    case WeightKind::Gaussian:
      // w = e^{-beta x^2 / 2}
      return fn::poly({0.0, -sys.beta});
    case WeightKind::PowerExponential:
      // w = x^alpha e^{-beta x}
      return fn::sum({fn::scale(sys.alpha, fn::power_of(fn::identity(), -1.0,
                                                        Interval::positive())),
                      fn::constant(-sys.beta)});
  }
  throw AlgebraError("unknown weight kind");
}

SmoothFn a_poly(const MasterSystem& sys) {
  return fn::poly({sys.A[0], sys.A[1], sys.A[2]});
}

bool nearly(double a, double b) { return std::fabs(a - b) < 1e-14; }

bool is_unit_A(const MasterSystem& s) {
  return nearly(s.A[0], 1) && nearly(s.A[1], 0) && nearly(s.A[2], 0);
}
bool is_x_A(const MasterSystem& s) {
  return nearly(s.A[0], 0) && nearly(s.A[1], 1) && nearly(s.A[2], 0);
}

}  // namespace

double MasterSystem::sigma() const { return 1.0 / std::sqrt(beta); }

Interval MasterSystem::r_domain() const {
  return change_of_variable(*this).r_domain;
}

Interval MasterSystem::sample_window() const {
  const double s = sigma();
  if (weight == WeightKind::Gaussian) {
    const double c = is_unit_A(*this) ? 2.0 * alpha / beta : 0.0;
    return {c - 6.0 * s, c + 6.0 * s};
  }
  return {0.3 * s, 9.0 * s};
}

MasterSystem catalog_lookup(const std::string& name, double alpha, double beta, int m) {
  MasterSystem sys;
  sys.alpha = alpha;
  sys.beta = beta;
  sys.m = m;
  if (name == "oscillator-like" || name == "shifted-oscillator") {
    // shifted-oscillator is the same system with beta = omega, alpha = b
    sys.family = "oscillator-like";
    sys.A = {1.0, 0.0, 0.0};
    sys.weight = WeightKind::Gaussian;
    sys.x_interval = Interval::all();
    sys.shift = ShiftRule::Unchanged;
  } else if (name == "radial-oscillator-like") {
    sys.family = "radial-oscillator-like";
    sys.A = {0.0, 1.0, 0.0};
    sys.weight = WeightKind::PowerExponential;
    sys.x_interval = {0.0, kInf};
    sys.shift = ShiftRule::AlphaPlusOne;
  } else {
    throw ConfigError("unknown catalog family '" + name + "'");
  }
  validate_params(name, sys.weight, alpha, beta, m);
  return sys;
}

MasterSystem make_generic_system(std::array<double, 3> A, WeightKind weight,
                                 Interval x_interval, double alpha, double beta,
                                 int m) {
  validate_params("generic", weight, alpha, beta, m);
  MasterSystem sys;
  sys.family = "generic";
  sys.A = A;
  sys.weight = weight;
  sys.x_interval = x_interval;
  sys.alpha = alpha;
  sys.beta = beta;
  sys.m = m;
  sys.shift = ShiftRule::None;
  return sys;
}

ChangeOfVariable change_of_variable(const MasterSystem& sys) {
  if (is_unit_A(sys))
    return {fn::poly({-2.0 * sys.alpha / sys.beta, 1.0}), Interval::all()};
  if (is_x_A(sys))
    return {fn::poly({0.0, 0.0, 0.25}), Interval::positive()};

  // Generic quadratic A: invert r(x) = int_x0^x A^{-1/2}. Requires A > 0 on
  // the interior of the x interval.
  const Interval xw = sys.x_interval.finite_window(8.0, 1e-6);
  const SmoothFn A = a_poly(sys);
  for (int i = 0; i <= 256; ++i) {
    const double x = xw.lo + (xw.hi - xw.lo) * i / 256.0;
    double v = sys.A[0] + x * (sys.A[1] + x * sys.A[2]);
    if (!(v > 0.0))
      throw AlgebraError("master polynomial not positive on the interval (A("
                         + std::to_string(x) + ") <= 0)");
  }
  const double x0 = 0.5 * (xw.lo + xw.hi);
  const SmoothFn inv_sqrt_A = fn::power_of(A, -0.5, sys.x_interval);
  const SmoothFn r_of_x = fn::antiderivative(inv_sqrt_A, x0);
  double r_lo = -kInf, r_hi = kInf;
  if (std::isfinite(sys.x_interval.lo)) r_lo = r_of_x(xw.lo);
  if (std::isfinite(sys.x_interval.hi)) r_hi = r_of_x(xw.hi);
  const Interval rdom{r_lo, r_hi};
  return {fn::monotone_inverse(r_of_x, {sys.A[0], sys.A[1], sys.A[2]}, 0.0, x0,
                               sys.x_interval, rdom),
          rdom};
}

SuperpotentialProfile superpotential(const MasterSystem& sys) {
  const auto cov = change_of_variable(sys);
  const SmoothFn A = a_poly(sys);
  const SmoothFn Ap = fn::poly({sys.A[1], 2.0 * sys.A[2]});
  const SmoothFn wlw = weight_log_derivative(sys);
  const double cm = (2.0 * sys.m - 1.0) / 4.0;
  const SmoothFn numer = fn::sum({fn::scale(0.5, fn::prod({A, wlw})),
                                  fn::scale(cm, Ap)});
  const SmoothFn w_x = fn::scale(-1.0, fn::prod({numer,
      fn::power_of(A, -0.5, sys.x_interval)}));
  return {fn::substitute(w_x, cov.x_of_r, cov.r_domain), sys.m, sys};
}

SmoothFn potential_vm(const MasterSystem& sys) {
  const auto cov = change_of_variable(sys);
  const SmoothFn A = a_poly(sys);
  const SmoothFn Ap = fn::poly({sys.A[1], 2.0 * sys.A[2]});
  const SmoothFn App = fn::constant(2.0 * sys.A[2]);
  const SmoothFn wlw = weight_log_derivative(sys);
  const SmoothFn Awlw = fn::prod({A, wlw});
  const SmoothFn invA = fn::power_of(A, -1.0, sys.x_interval);
  const double m = sys.m;
  const SmoothFn v_x = fn::sum({
      fn::scale(-0.5, Awlw.derivative()),
      fn::scale(-(2.0 * m - 1.0) / 4.0, App),
      fn::scale(0.25, fn::prod({Awlw, Awlw, invA})),
      fn::scale(0.5 * m, fn::prod({Ap, wlw})),
      fn::scale((4.0 * m * m - 1.0) / 16.0, fn::prod({Ap, Ap, invA})),
  });
  return fn::substitute(v_x, cov.x_of_r, cov.r_domain);
}

std::pair<SmoothFn, SmoothFn> partner_potentials(const SuperpotentialProfile& prof) {
  const SmoothFn w2 = prof.W * prof.W;
  const SmoothFn wp = prof.W.derivative();
  return {w2 + wp, w2 - wp};
}

double energy(const MasterSystem& sys, int n, int m) {
  if (m < 0 || n < m - 1)
    throw AlgebraError("energy requires n >= m-1 >= -1 (got n=" + std::to_string(n)
                       + ", m=" + std::to_string(m) + ")");
  const SmoothFn A = a_poly(sys);
  const SmoothFn wlw = weight_log_derivative(sys);
  const SmoothFn bracket = fn::prod({A, wlw}).derivative()
      + fn::constant(0.5 * (n + m) * 2.0 * sys.A[2]);
  const Interval xw = sys.x_interval.finite_window(4.0, 0.1);
  double mean = 0.0, mean_sq = 0.0;
  const int N = 64;
  for (int i = 0; i < N; ++i) {
    const double x = xw.lo + (xw.hi - xw.lo) * (i + 0.5) / N;
    const double v = bracket(x);
    mean += v / N;
    mean_sq += v * v / N;
  }
  const double sd = std::sqrt(std::max(0.0, mean_sq - mean * mean));
  if (sd > 1e-9 * (1.0 + std::fabs(mean)))
    throw AlgebraError("spectrum bracket is not constant in x (stddev "
                       + std::to_string(sd) + "); refusing to average");
  const double mid = bracket(0.5 * (xw.lo + xw.hi));
  return -(n - m + 1.0) * mid;
}

MasterSystem apply_shift(const MasterSystem& sys) {
  MasterSystem s = sys;
  switch (sys.shift) {
    case ShiftRule::Unchanged:
      return s;
    case ShiftRule::AlphaPlusOne:
      s.alpha += 1.0;
      return s;
    case ShiftRule::None:
      break;
  }
  throw AlgebraError("no parameter-shift rule known for family '" + sys.family + "'");
}

ShapeInvariance shape_invariance_check(const MasterSystem& sys) {
  return shape_invariance_check(sys, apply_shift(sys));
}

ShapeInvariance shape_invariance_check(const MasterSystem& sys,
                                       const MasterSystem& shifted) {
  const auto prof0 = superpotential(sys);
  const auto prof1 = superpotential(shifted);
  const SmoothFn v1 = partner_potentials(prof0).first;
  const SmoothFn v2 = partner_potentials(prof1).second;
  const Interval w = sys.sample_window();
  const int N = 256;
  double mean = 0.0;
  std::vector<double> d(N);
  for (int i = 0; i < N; ++i) {
    const double r = w.lo + (w.hi - w.lo) * (i + 0.5) / N;
    d[i] = v1(r) - v2(r);
    mean += d[i] / N;
  }
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean) / N;
  const double sd = std::sqrt(var);
  return {sd < 1e-9 * (1.0 + std::fabs(mean)), mean, sd};
}

double ladder_spacing(const MasterSystem& sys) {
  if (!sys.is_catalog())
    throw AlgebraError("ladder spacing undefined for non-catalog systems; refusing to guess");
  return sys.beta;
}

}  // namespace msf
