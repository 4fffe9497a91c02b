#pragma once

#include <vector>

#include "stringspectra/density.hpp"

namespace stringspectra {

/// Cumulative phase Phi(x) = Int_{-L}^x sqrt(rho) dt, precomputed on a fine
/// uniform grid (composite Simpson per cell, so the accumulation is O(h^4))
/// and interpolated by cubic Hermite segments whose end slopes are the exact
/// derivative sqrt(rho). Strictly increasing with Phi(-L) = 0 and
/// Phi(L) = 2L <sqrt(rho)>.
class PhaseIntegral {
 public:
  explicit PhaseIntegral(const DensityProfile& profile, int cells = 8192);

  /// Phi(x); x is clamped to [-L, L] after a domain check.
  double operator()(double x) const;
  /// Phi(L).
  double total() const { return phi_.back(); }
  double half_length() const { return l_; }

 private:
  double l_;
  double h_;
  std::vector<double> phi_;
  std::vector<double> slope_;
};

/// eps_n / <sqrt(rho)>^2: the leading Weyl/WKB energy. Exact for constant
/// densities and, remarkably, for the whole quartic-decay (borg) family.
double wkb_energy(int n, const DensityProfile& profile);

/// Precomputed-phase evaluator for the WKB mode
///   psi_n(x) = (Phi_L/2)^{-1/2} rho(x)^{-1/4} sin(n pi Phi(x)/Phi_L),
/// which obeys the Dirichlet ends exactly and is asymptotically normalized
/// to unit rho-weighted norm.
class WkbSolver {
 public:
  explicit WkbSolver(const DensityProfile& profile, int cells = 8192);

  const PhaseIntegral& phase() const { return phase_; }
  double energy(int n) const;
  double wavefunction(int n, double x) const;

 private:
  DensityProfile profile_;
  PhaseIntegral phase_;
};

/// Single-point convenience: builds the phase table on every call, so prefer
/// WkbSolver when evaluating a mode at many positions.
double wkb_wavefunction(int n, const DensityProfile& profile, double x);

}  // namespace stringspectra
