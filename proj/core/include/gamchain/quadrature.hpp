// Adaptive one-dimensional quadrature on a finite interval using the
// Gauss-Kronrod 7/15 pair with interval bisection.
#pragma once

#include <functional>

namespace gamchain {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;  // accumulated Kronrod error estimate
  int subdivisions = 0;    // number of bisections performed
  bool converged = false;
};

// Integrates f over [a, b]. A segment is accepted when its error estimate is
// below its width-proportional share of max(abs_tol, rel_tol * |whole|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-10,
                     int max_subdivisions = 2000);

}  // namespace gamchain
