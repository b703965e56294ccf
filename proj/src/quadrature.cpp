#include "msf/quadrature.hpp"

#include <cstdlib>

namespace msf {

double default_quad_tol() {
  static const double tol = [] {
    if (const char* s = std::getenv("MSF_QUAD_TOL")) {
      double v = std::atof(s);
      if (v > 0 && v < 1e-2) return v;
    }
    return 1e-12;
  }();
  return tol;
}

}  // namespace msf
