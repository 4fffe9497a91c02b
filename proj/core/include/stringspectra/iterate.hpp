#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stringspectra/density.hpp"
#include "stringspectra/grid.hpp"

namespace stringspectra {

/// One step of the fundamental-mode contraction. The record keeps everything
/// a convergence study needs: the iterate itself (unit L2 norm), the constant
/// kappa that enforces the right-end zero, the energy estimate, the raw norm
/// that was divided out, and how far the ends are from zero.
struct IterationTrace {
  int index = 0;
  SampledFunction xi;
  double kappa = 0.0;
  double rayleigh = 0.0;
  double norm_factor = 0.0;
  double boundary_residual = 0.0;
};

/// A single converged (or best-effort) mode: energy, physical mode samples
/// psi = xi/sqrt(rho) (automatically rho-normalized when xi has unit L2
/// norm), and bookkeeping.
struct ModeSolution {
  double energy = 0.0;
  SampledFunction mode;
  bool converged = true;
  double residual = 0.0;
  std::string method;
};

/// Result of the fundamental-mode iteration: the mode, the full per-step
/// trace, and whether the Rayleigh-quotient increments dropped below
/// tolerance before the iteration cap.
struct IterationResult {
  ModeSolution mode;
  std::vector<IterationTrace> trace;
  bool converged = false;
};

/// Applies the integral contraction
///   xi_n(x) = sqrt(rho(x)) Int_{-L}^x dy [kappa_n - Int_{-L}^y sqrt(rho) xi_{n-1} dz],
/// with kappa_n chosen so the right end lands on zero, then normalizes to
/// unit L2 norm. Both cumulative integrals share the trapezoid stencil, so
/// the endpoint zeros hold to round-off. prev must live on the density grid.
SampledFunction theorem1_step(const SampledFunction& prev,
                              const SampledDensity& density);

/// Rayleigh quotient of the symmetrized operator,
///   Int (d(xi/sqrt(rho))/dx)^2 dx / Int xi^2 dx,
/// in the first-derivative form (no second differencing). Derivatives use
/// 4th-order centered stencils on uniform grids (one-sided at the ends) and
/// 3-point non-uniform stencils otherwise. Throws on zero-norm input.
double rayleigh_quotient(const SampledFunction& f, const SampledDensity& density);

/// Iterates theorem1_step from xi0 until the energy estimate moves by less
/// than tol (relative) or max_iter is hit; in the latter case the result is
/// returned with converged = false so the caller can warn. The per-step
/// energy is the inner product of consecutive normalized iterates divided by
/// the raw norm, which is the exact Rayleigh quotient of the new iterate
/// under the integral operator (the form that converges from above).
IterationResult theorem1_solve(const SampledFunction& xi0,
                               const SampledDensity& density, double tol = 1e-10,
                               int max_iter = 50);

/// Trial functions for the block and pencil solvers, held on one shared
/// grid, each normalized to unit L2 norm and ordered by ascending Rayleigh
/// quotient at construction.
class TrialSet {
 public:
  TrialSet(std::vector<SampledFunction> functions, const SampledDensity& density);

  std::size_t size() const { return functions_.size(); }
  const std::vector<SampledFunction>& functions() const { return functions_; }
  const std::vector<double>& ordering_energies() const { return energies_; }

 private:
  std::vector<SampledFunction> functions_;
  std::vector<double> energies_;
};

/// The weighted Gegenbauer starting family on L = 1/2,
///   xi0_n(x) = 3 sqrt(2) (1-4x^2) C_{n+1}^{(5/2)}(2x) / norm_n,
/// n = 0..count-1, each of unit L2 norm (closed-form normalization),
/// evaluated by the three-term recurrence. The grid must span [-1/2, 1/2].
std::vector<SampledFunction> gegenbauer_trials(int count, const GridPtr& grid);

/// Block iteration for the lowest size() modes: every sweep applies
/// theorem1_step to each member, re-orthogonalizes (classical Gram-Schmidt,
/// applied twice to keep round-off from re-seeding converged components),
/// and reorders by Rayleigh quotient. Rank loss during orthogonalization
/// raises an error naming the failing member index.
std::vector<ModeSolution> theorem2_block(const TrialSet& trials,
                                         const SampledDensity& density,
                                         int iterations);

/// One contraction step applied to every trial, then the generalized pencil
///   A c = lambda B c,  A_ij = Int d(xi_i/sqrt(rho))/dx d(xi_j/sqrt(rho))/dx,
///                      B_ij = Int xi_i xi_j,
/// over the stepped-and-normalized trials. Eigenvalues approximate the
/// lowest modes from above; eigenvectors give Ritz modes. A linearly
/// dependent trial set surfaces as a non-positive-definite B.
std::vector<ModeSolution> gep_from_trials(const TrialSet& trials,
                                          const SampledDensity& density);

/// Krylov variant: the trial set is the orbit of xi0 under the contraction,
/// depth members deep (depth 1 reduces to the Rayleigh quotient of the first
/// iterate). Rank loss is reported with the offending depth: successive
/// iterates align with the fundamental, so large depths go dependent.
std::vector<ModeSolution> krylov_gep(const SampledFunction& xi0,
                                     const SampledDensity& density, int depth);

/// Variational minimum over a one-parameter starting family.
struct VariationalResult {
  double upsilon = 0.0;
  double energy = 0.0;
};

/// Golden-section minimization of
///   rayleigh_quotient(theorem1_step(xi0(., upsilon)))
/// over upsilon in [scan_min, scan_max]. When the objective at the located
/// minimum ties the upsilon = 0 value (flat family, e.g. constant density),
/// the tie breaks toward upsilon = 0.
VariationalResult variational_solve(
    const std::function<double(double, double)>& family,  // (x, upsilon)
    const SampledDensity& density, double scan_min, double scan_max);

/// The restricted-interval contraction: same integral step, but the constant
///   kappa = F(L') / (L + L'),  F(y) = Int_{-L}^y G,  G(y) = Int_{-L}^y sqrt(rho) eta,
/// pins the zero at x = L' instead of the right end. Returns the raw
/// (unnormalized) iterate, which vanishes at -L and L' by construction.
/// L' must lie in (-L, L]; at L' = L this is exactly the theorem1 step
/// before normalization.
SampledFunction theorem3_step(const SampledFunction& prev,
                              const SampledDensity& density, double l_prime);

/// One accepted shooting root: the restriction point, the boundary residual
/// of the final normalized iterate at x = +L, and the resulting mode.
struct ShootingResult {
  double l_prime = 0.0;
  int iterations = 0;
  double boundary_residual = 0.0;
  double energy = 0.0;
  SampledFunction mode;
};

/// Excited states by shooting in L': for each candidate L' the restricted
/// contraction runs n_iter sweeps (L' held fixed; each iterate normalized)
/// and the residual eta_n(+L) is recorded; roots of the residual located by
/// scan + bisection to tol. The L' = L branch (residual identically zero,
/// invisible to a sign scan) is evaluated explicitly and reported first --
/// it is the fundamental. Results come back ordered by ascending energy;
/// each energy is the integral-operator Rayleigh quotient of the converged
/// iterate, which at a residual root coincides with the full-interval
/// quotient.
/// An empty list (beyond the L' = L branch) means the scan saw no sign
/// change; raise n_iter or scan_points.
std::vector<ShootingResult> shoot_excited(
    const DensityProfile& density, const GridPtr& grid,
    const std::function<double(double, double)>& eta0,  // (x, L')
    int n_iter, int scan_points, double tol);

/// Convenience overload: uniform 20001-point grid and the bridge family
/// eta0(x; L') = (x + L)(L' - x).
std::vector<ShootingResult> shoot_excited(const DensityProfile& density,
                                          int n_iter = 20, int scan_points = 300,
                                          double tol = 1e-10);

}  // namespace stringspectra
