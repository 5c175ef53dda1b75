#pragma once

#include <functional>

#include "zlog/common.hpp"

namespace zlog {

struct QuadResult {
  cplx value;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

/// Globally adaptive Gauss-Kronrod (7/15) for a complex-valued function of a real variable.
QuadResult integrate_real(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                          int max_intervals = 4000);

/// Integral of f(z) dz along the straight segment from a to b.
QuadResult integrate_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, double abs_tol,
                             int max_intervals = 4000);

/// Counter-clockwise contour integral over |z - center| = radius, trapezoid rule with doubling.
QuadResult integrate_circle(const std::function<cplx(cplx)>& f, cplx center, double radius, double abs_tol,
                            int max_points = 1 << 16);

}  // namespace zlog
