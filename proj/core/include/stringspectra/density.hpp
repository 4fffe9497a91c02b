#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stringspectra/grid.hpp"

namespace stringspectra {

enum class DensityFamily { constant, borg, parabolic, linear, expression, tabulated };

/// Mean values that feed the perturbative and asymptotic solvers:
/// rho0 = (1/2L) \int rho, mean_sqrt = (1/2L) \int sqrt(rho), and the first
/// two moments of sigma = rho/rho0 - 1.
struct DensityMoments {
  double rho0 = 0.0;
  double mean_sqrt = 0.0;
  double mean_sigma = 0.0;
  double mean_sigma_sq = 0.0;
};

/// A positive mass density rho(x) on (-L, L). Immutable after construction;
/// evaluation is pure and thread-safe. Built-in families:
///
///   constant     rho = c
///   borg         rho = (1+a)^2 / (1 + a(x+1/2))^4,  a > -1   (all E_n = n^2 pi^2)
///   parabolic    rho = (1 + a x)^2,                 |a| <= 2
///   linear       rho = 1 + a x,                     |a| < 2
///   expression   arbitrary positive expression in x
///   tabulated    monotone-cubic interpolation of (x, rho) samples
///
/// Positivity is validated by sampling at construction; the closed-form
/// families also enforce their parameter ranges directly.
class DensityProfile {
 public:
  static DensityProfile constant(double value = 1.0, double half_length = 0.5);
  static DensityProfile borg(double alpha);
  static DensityProfile parabolic(double alpha);
  static DensityProfile linear(double alpha);
  static DensityProfile expression(const std::string& text, double half_length = 0.5);
  /// Expression family backed by a compiled callable instead of parsed text
  /// (used by the isospectral transform); `label` is carried for reports.
  static DensityProfile expression(std::function<double(double)> fn,
                                   const std::string& label,
                                   double half_length = 0.5,
                                   std::map<std::string, double> params = {});
  static DensityProfile tabulated(std::vector<double> x, std::vector<double> rho);

  /// rho(x); domain-checked against [-L, L].
  double operator()(double x) const;
  double sqrt_at(double x) const;

  DensityFamily family() const { return family_; }
  double half_length() const { return L_; }
  /// Named parameters (e.g. "alpha"); throws for unknown names.
  double parameter(const std::string& name) const;
  bool has_parameter(const std::string& name) const;
  /// Human-readable spec string ("borg:alpha=10", expression text, ...).
  const std::string& label() const { return label_; }

  /// Moments via adaptive Simpson (abs tol 1e-12) with closed-form overrides
  /// where the family admits them. Computed once at construction.
  const DensityMoments& moments() const;
  /// sigma(x) = rho(x)/rho0 - 1.
  double sigma(double x) const;

 private:
  DensityProfile() = default;
  void validate_positive(int samples) const;

  DensityFamily family_ = DensityFamily::constant;
  double L_ = 0.5;
  std::function<double(double)> eval_;
  std::map<std::string, double> params_;
  std::string label_;
  std::shared_ptr<DensityMoments> moments_;  // computed eagerly at construction
};

/// Density samples (values and square roots) on a shared grid.
struct SampledDensity {
  GridPtr grid;
  std::vector<double> values;
  std::vector<double> sqrt_values;
};

/// Samples the profile on an arbitrary grid.
SampledDensity sample_density(const DensityProfile& rho, const GridPtr& grid);

/// Isospectral map for unit-length strings (L = 1/2): the coordinate change
///   y(x) = (x+1/2)(1+alpha)/(1 + alpha(x+1/2)) - 1/2,
/// with rho2(x) = y'(x)^2 rho1(y(x)), preserves the whole Dirichlet spectrum
/// and \int sqrt(rho). Applying it to the unit density produces exactly the
/// borg family. Requires alpha > -1.
DensityProfile gottlieb_transform(const DensityProfile& source, double alpha);

/// Parses the CLI mini-language:
///   "constant"           unit density
///   "constant:value=2"   scaled
///   "borg:alpha=10"
///   "parabolic:alpha=1"
///   "linear:alpha=0.5"
///   "expr:(1+0.5*x)^2"
///   "file:path.csv"      two-column CSV x,rho
DensityProfile parse_density_spec(const std::string& spec);

}  // namespace stringspectra
