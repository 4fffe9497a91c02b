#pragma once

#include <functional>
#include <vector>

namespace stringspectra {

/// A sign-change bracket [a, b] with the residual values at both ends.
struct RootBracket {
  double a = 0.0, b = 0.0;
  double fa = 0.0, fb = 0.0;
};

/// Scans [a, b] in n_scan equal subintervals for sign changes of `residual`
/// and bisects every bracket down to |b - a| <= tol. Scan samples that are
/// exactly zero are returned as roots directly. Roots come back ascending;
/// an empty list means no sign change was seen.
std::vector<double> find_roots(const std::function<double(double)>& residual,
                               double a, double b, int n_scan, double tol);

}  // namespace stringspectra
