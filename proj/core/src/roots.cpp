#include "stringspectra/roots.hpp"

#include <cmath>
#include <stdexcept>

namespace stringspectra {

std::vector<double> find_roots(const std::function<double(double)>& residual,
                               double a, double b, int n_scan, double tol) {
  if (!(b > a)) throw std::invalid_argument("scan interval is empty");
  if (n_scan < 8) throw std::invalid_argument("need at least 8 scan intervals");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");

  std::vector<double> roots;
  const double h = (b - a) / n_scan;
  double left = a, fleft = residual(a);
  if (fleft == 0.0) roots.push_back(a);
  for (int i = 1; i <= n_scan; ++i) {
    const double right = (i == n_scan) ? b : a + h * i;
    const double fright = residual(right);
    if (fright == 0.0) {
      roots.push_back(right);
    } else if (fleft != 0.0 && std::signbit(fleft) != std::signbit(fright)) {
      double lo = left, hi = right, flo = fleft;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = residual(mid);
        if (fmid == 0.0) { lo = hi = mid; break; }
        if (std::signbit(flo) != std::signbit(fmid)) hi = mid;
        else { lo = mid; flo = fmid; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    left = right;
    fleft = fright;
  }
  return roots;
}

}  // namespace stringspectra
