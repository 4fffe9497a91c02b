#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace stringspectra {

/// A strictly increasing set of sample points on [a, b].
///
/// Uniform grids are the default for every solver; the graded variant packs
/// geometrically shrinking cells against both endpoints and is required for
/// densities with steep boundary layers (e.g. quartic-decay profiles at very
/// large parameter values), where uniform grids of any practical size fail.
class Grid {
 public:
  /// n equally spaced points spanning [a, b] inclusive. n >= 3.
  static std::shared_ptr<const Grid> uniform(double a, double b, std::size_t n);

  /// Approximately n points on [a, b]: geometric refinement over bands of
  /// width `edge_width` at both ends (smallest cell `min_cell`, a fraction
  /// `edge_fraction` of all points per band) and a uniform middle section.
  static std::shared_ptr<const Grid> graded(double a, double b, std::size_t n,
                                            double edge_width = 0.1,
                                            double min_cell = 1e-13,
                                            double edge_fraction = 0.25);

  const std::vector<double>& points() const { return x_; }
  std::size_t size() const { return x_.size(); }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  bool is_uniform() const { return uniform_; }
  /// Spacing of a uniform grid (meaningless for graded grids).
  double spacing() const { return spacing_; }

  explicit Grid(std::vector<double> pts);

 private:
  std::vector<double> x_;
  bool uniform_ = false;
  double spacing_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Function samples bound to a grid.
struct SampledFunction {
  GridPtr grid;
  std::vector<double> values;

  SampledFunction() = default;
  SampledFunction(GridPtr g, std::vector<double> v);
  /// Samples f at every grid point.
  template <class F>
  static SampledFunction from(const GridPtr& g, F&& f) {
    std::vector<double> v;
    v.reserve(g->size());
    for (double xi : g->points()) v.push_back(f(xi));
    return SampledFunction(g, std::move(v));
  }
};

/// Composite trapezoid over the whole grid (non-uniform aware).
double integrate(const SampledFunction& f);

/// Running trapezoid integral F(x_k) = \int_a^{x_k} f dt with F(a) = 0.
/// Second-order accurate; uses the identical stencil as integrate() so that
/// constructions which rely on exact discrete cancellation (the iteration
/// constants kappa) vanish at the right endpoint to round-off.
SampledFunction cumulative_integral(const SampledFunction& f);

/// Trapezoid inner product  \int f g dx on a shared grid.
double inner_product(const SampledFunction& f, const SampledFunction& g);

/// sqrt of the trapezoid L2 norm.
double norm_l2(const SampledFunction& f);

/// Scales values so norm_l2 == 1; returns the previous norm.
double normalize_l2(SampledFunction& f);

/// Value of the sampled function at an arbitrary abscissa via 4-point
/// Lagrange interpolation (O(h^4) on uniform grids). x must lie inside the
/// grid span.
double interpolate_value(const SampledFunction& f, double x);

}  // namespace stringspectra
