#include "stringspectra/quadrature.hpp"

#include <cmath>

namespace stringspectra {
namespace {

struct Worker {
  const std::function<double(double)>& f;
  double worst_error = 0.0;
  bool converged = true;

  double refine(double a, double b, double fa, double fm, double fb,
                double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
      if (depth <= 0 && std::abs(delta) > 15.0 * tol) {
        converged = false;
        worst_error = std::max(worst_error, std::abs(delta) / 15.0);
      }
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol,
                                  int max_depth) {
  Worker w{f};
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  QuadratureResult r;
  r.value = w.refine(a, b, fa, fm, fb, whole, abs_tol, max_depth);
  r.converged = w.converged;
  r.error_estimate = w.converged ? abs_tol : w.worst_error;
  return r;
}

}  // namespace stringspectra
