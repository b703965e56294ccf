#pragma once

#include <cmath>
#include <utility>

#include "msf/errors.hpp"

namespace msf {

/// Default absolute quadrature tolerance (1e-12). Overridable through the
/// MSF_QUAD_TOL environment variable; read once per process.
double default_quad_tol();

namespace detail {

// Gauss 7 / Kronrod 15 abscissae and weights on [-1, 1].
// node, Gauss weight (0 for Kronrod-only nodes), Kronrod weight
inline constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
std::pair<double, double> gk15_panel(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double y0 = f(mid);
  double g7 = kGK15[0][1] * y0;
  double k15 = kGK15[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15[i][0];
    const double yi = f(mid + dx) + f(mid - dx);
    g7 += kGK15[i][1] * yi;
    k15 += kGK15[i][2] * yi;
  }
  g7 *= half;
  k15 *= half;
  return {k15, std::fabs(k15 - g7)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b]
/// to absolute tolerance abs_tol. Throws QuadratureError when the interval
/// stack refuses to converge.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  struct Seg {
    double a, b, tol;
  };
  constexpr int kMaxSegs = 4096;
  Seg stack[64];
  int top = 0;
  stack[top++] = {a, b, std::fabs(abs_tol)};
  double total = 0.0;
  int used = 0;
  while (top > 0) {
    Seg s = stack[--top];
    if (++used > kMaxSegs)
      throw QuadratureError("adaptive quadrature did not converge on ["
                            + std::to_string(a) + ", " + std::to_string(b) + "]");
    auto [value, err] = detail::gk15_panel(f, s.a, s.b);
    if (!std::isfinite(value))
      throw QuadratureError("non-finite integrand near ["
                            + std::to_string(s.a) + ", " + std::to_string(s.b) + "]");
    if (err <= s.tol || err <= 1e-16 * std::fabs(value)) {
      total += value;
      continue;
    }
    if (top + 2 > 64)
      throw QuadratureError("quadrature recursion too deep");
    const double mid = 0.5 * (s.a + s.b);
    stack[top++] = {s.a, mid, 0.5 * s.tol};
    stack[top++] = {mid, s.b, 0.5 * s.tol};
  }
  return total;
}

}  // namespace msf
