#pragma once

#include <functional>

namespace stringspectra {

/// Result of an adaptive quadrature: value, an error estimate, and whether
/// the requested tolerance was met before the recursion depth cap.
struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

/// Adaptive composite Simpson on [a, b] with absolute tolerance `abs_tol`.
/// Splits intervals until the local Richardson estimate meets the (depth
/// scaled) tolerance or `max_depth` is reached; non-convergence is reported,
/// never silently ignored.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol = 1e-12,
                                  int max_depth = 48);

}  // namespace stringspectra
