#pragma once

#include <vector>

#include "stringspectra/density.hpp"

namespace stringspectra {

/// The unperturbed (uniform-string) basis: energies eps_n = n^2 pi^2/(4L^2)
/// and modes psi_n(x) = sin(n pi (x+L)/2L)/sqrt(L), orthonormal on (-L, L).
/// k_max bounds every intermediate-state sum.
struct PTBasis {
  double half_length = 0.5;
  int k_max = 200;

  double epsilon(int n) const;
  double psi(int n, double x) const;
};

/// Energy denominators omega_nk = eps_n - eps_k, evaluated in the closed form
/// scale * (n^2 - k^2) so that antisymmetry omega_nk = -omega_kn is exact and
/// no entry vanishes off the diagonal (the 1-D spectrum is non-degenerate).
struct FrequencyDenominators {
  double scale = 0.0;  // pi^2 / (4 L^2)

  explicit FrequencyDenominators(const PTBasis& basis);
  double omega(int n, int k) const {
    return scale * (static_cast<double>(n) * n - static_cast<double>(k) * k);
  }
};

/// Matrix elements <n|sigma|k> of the relative density deviation
/// sigma = rho/rho0 - 1 in the uniform-string basis. Products of two basis
/// sines reduce to cosines, so the whole table is backed by the moments
///   I(m) = Int cos(m pi (x+L)/2L) sigma(x) dx,  m = 0..2 k_max,
/// each by adaptive quadrature; elements are <n|sigma|k> =
/// (I(|n-k|) - I(n+k))/(2L), making symmetry structural. Construction fails
/// naming an affected element if any moment quadrature does not converge.
class SigmaMatrix {
 public:
  SigmaMatrix(const DensityProfile& profile, int k_max);
  /// Externally supplied deviation sigma(x) (not necessarily of zero mean),
  /// with rho0 taken as 1: the matrix then describes the abstract expansion
  /// rho = 1 + sigma rather than a profile's own decomposition.
  SigmaMatrix(const std::function<double(double)>& sigma_fn, double half_length,
              int k_max);

  int k_max() const { return k_max_; }
  double rho0() const { return rho0_; }
  double half_length() const { return half_length_; }
  /// <n|sigma|k>, 1-based indices up to k_max.
  double at(int n, int k) const;
  /// Largest quadrature error estimate over the backing moments.
  double max_quadrature_error() const { return max_error_; }

 private:
  void build_moments(const std::function<double(double)>& sigma_fn);

  int k_max_;
  double rho0_;
  double half_length_;
  std::vector<double> moments_;
  double max_error_ = 0.0;
};

/// Spec-named factory for the table above. Requires k_max >= 2.
SigmaMatrix sigma_matrix(const DensityProfile& profile, int k_max);

/// Energy corrections for one mode. corrections[j] holds the physical
/// correction E_n^(j) (the rho0 division already applied), j = 0..order;
/// partial_sums[j] the running total. The tail estimate sums the magnitudes
/// of the intermediate-state terms in the last index octave (k > k_max/2),
/// relative to E_n^(0) -- for the 1/k^2-decaying elements of smooth
/// densities that octave sum matches the dropped k > k_max remainder. When
/// it exceeds 1e-8 the warning flag is set instead of silently truncating.
struct PTReport {
  int mode = 0;
  int order = 0;
  double rho0 = 1.0;
  std::vector<double> corrections;
  std::vector<double> partial_sums;
  double resummed = 0.0;
  double tail_estimate = 0.0;
  bool tail_warning = false;
};

/// Rayleigh-Schroedinger corrections through `order` (0..3):
///   rho0 E^(1) = -eps_n <n|s|n>
///   rho0 E^(2) = eps_n <n|s|n>^2 + eps_n^2 sum_{k != n} <n|s|k>^2/omega_nk
///   rho0 E^(3) = -eps_n <n|s|n>^3 + eps_n^3 <n|s|n> sum <n|s|k>^2/omega_nk^2
///                - 3 eps_n^2 <n|s|n> sum <n|s|k>^2/omega_nk
///                - eps_n^3 sum_{k,m != n} <n|s|k><k|s|m><m|s|n>/(omega_nk omega_nm),
/// sums truncated at k_max (the double sum in O(k_max^2)). Requires
/// n <= k_max/2 so intermediate states have headroom. The report also
/// carries the geometric resummation eps_n/(rho0 (1 + <n|s|n>)).
PTReport pt_energy(int n, int order, const SigmaMatrix& sigma,
                   const PTBasis& basis);

/// The geometric-series estimate E_n ~ eps_n / <n|rho|n>, the diagonal
/// element evaluated by adaptive quadrature against the profile directly.
double resummed_energy(int n, const DensityProfile& profile,
                       const PTBasis& basis);

/// psi_n(x) plus the first-order correction
///   -(1/2) sum_{k != n} <k|sigma|n> (eps_n + eps_k)/(eps_n - eps_k) psi_k(x),
/// truncated at k_max. Requires n <= k_max/2.
///
/// This is the first-order eigenfunction of the symmetrized operator, i.e. it
/// approximates sqrt(rho(x)) times the displacement mode; divide by
/// sqrt(rho(x)) to compare against a solution of the original problem.
double pt_wavefunction_first_order(int n, const SigmaMatrix& sigma,
                                   const PTBasis& basis, double x);

/// Large-n limit of the relative second-order term:
///   (1/4)<sigma^2> + (3/4)<sigma>^2.
/// The profile overload reads both means off the cached moments (where
/// <sigma> = 0 by construction); the two-argument overload serves externally
/// supplied deviations with nonzero mean.
double asymptotic_second_order(const DensityProfile& profile);
double asymptotic_second_order(double mean_sigma, double mean_sigma_sq);

}  // namespace stringspectra
