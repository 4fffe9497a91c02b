#pragma once

#include <memory>
#include <vector>

#include "stringspectra/density.hpp"
#include "stringspectra/grid.hpp"
#include "stringspectra/linalg.hpp"

namespace stringspectra {

/// Uniform interior grid x_k = 2Lk/N, k = -N/2+1 .. N/2-1, carried by the
/// little-sinc cardinal basis
///
///   s_k(x) = ((-1)^k / N) cos(pi k/N) sin(N pi x/2L)
///            / (sin(pi x/2L) - sin(pi k/N)),
///
/// equivalently the truncated sine-basis kernel
/// (2L/N) sum_{n=1}^N psi_n(x) psi_n(x_k) with psi_n the unit-density string
/// modes. Every s_k vanishes at both ends, so the basis builds Dirichlet
/// boundary conditions in. N must be even and >= 8; spacing h = 2L/N.
class LsfGrid {
 public:
  explicit LsfGrid(int n, double half_length = 0.5);

  int n() const { return n_; }
  double half_length() const { return half_length_; }
  double spacing() const { return 2.0 * half_length_ / n_; }
  /// Number of interior points, N - 1.
  int size() const { return n_ - 1; }

  int min_index() const { return 1 - n_ / 2; }
  int max_index() const { return n_ / 2 - 1; }
  /// x_k for the signed index k.
  double point(int k) const;
  /// Signed index from the storage offset p in 0..N-2.
  int index_of(int offset) const { return offset + 1 - n_ / 2; }

  /// The interior points as a shared Grid (uniform, no endpoints).
  const GridPtr& interior_grid() const { return interior_; }

  /// Cached sin(pi k/N), cos(pi k/N) by storage offset (used by the basis
  /// evaluation hot path).
  double sin_table(int offset) const { return sin_[offset]; }
  double cos_table(int offset) const { return cos_[offset]; }

 private:
  int n_;
  double half_length_;
  GridPtr interior_;
  std::vector<double> sin_, cos_;
};

/// s_k(x). Evaluates the closed form away from nodes; near a node of the
/// denominator (removable singularity) it falls back to the defining sine
/// sum, which also supplies the cardinal value s_k(x_k) = 1.
/// Throws std::out_of_range for k outside the grid, std::domain_error for x
/// outside [-L, L].
double lsf_value(int k, const LsfGrid& grid, double x);

/// Discrete second derivative on the interior grid: entries
/// c2(k,j) = d^2 s_k / dx^2 at x_j, evaluated exactly through the sine sum
///   c2 = -(2L/N) sum_{n=1}^N (n pi/2L)^2 psi_n(x_j) psi_n(x_k)
/// (closed form; agrees with the direct sum to round-off). Symmetric with
/// negative diagonal.
class DerivativeMatrix {
 public:
  DerivativeMatrix(int n, double half_length);

  int order() const { return n_ - 1; }
  int n() const { return n_; }
  double half_length() const { return half_length_; }

  /// Entry by storage offsets p, q in 0..N-2.
  double at(std::size_t p, std::size_t q) const { return entries_.at(p, q); }
  const SymmetricMatrix& entries() const { return entries_; }

  /// Applies the matrix to samples on the interior grid.
  std::vector<double> apply(const std::vector<double>& f) const;

 private:
  int n_;
  double half_length_;
  SymmetricMatrix entries_;
};

/// Cached accessor: matrices are built once per (N, L) and shared. Concurrent
/// readers are cheap; the first request for a given key builds under an
/// exclusive lock.
std::shared_ptr<const DerivativeMatrix> second_derivative_matrix(const LsfGrid& grid);

/// The symmetrized operator
///   O_sym(k,k') = -(1/sqrt(rho(x_k))) c2(k,k') (1/sqrt(rho(x_k'))),
/// a dense symmetric matrix of order N-1 whose eigenvalues are the string
/// energies and whose eigenvectors are phi = sqrt(rho) psi on the grid.
/// The density samples must live on grid.interior_grid(); a mismatched grid
/// raises std::invalid_argument.
SymmetricMatrix assemble_symmetrized(const SampledDensity& density,
                                     const LsfGrid& grid);

/// Spectrum and modes from one dense eigensolve of O_sym.
struct CollocationSpectrum {
  LsfGrid grid;
  DensityProfile density;
  /// Ascending energies, n_modes of them.
  std::vector<double> energies;
  /// modes[n][p]: psi_{n+1} at interior node offset p, normalized so that
  /// sum_k psi^2 rho h = 1 with the first interior sample positive.
  std::vector<std::vector<double>> modes;
  /// Eigensolver residual norms for the retained modes.
  std::vector<double> residual_norms;
  /// sqrt(rho) at the interior nodes (kept so interpolation never has to
  /// resample the density).
  std::vector<double> sqrt_density;

  int n_modes() const { return static_cast<int>(energies.size()); }
};

/// Samples the density, assembles O_sym, solves, and converts eigenvectors to
/// physical modes psi = phi/sqrt(rho). Requires 1 <= n_modes <= N-1.
CollocationSpectrum solve_spectrum(const DensityProfile& density, int n,
                                   int n_modes = 10);

/// psi_n at arbitrary x: cardinal interpolation of the sqrt(rho)-scaled
/// samples, rescaled by 1/sqrt(rho(x)). Exact at the nodes; zero at +-L.
/// n is 1-based. Throws std::out_of_range for a mode not computed,
/// std::domain_error for x outside [-L, L].
double interpolate_mode(const CollocationSpectrum& spectrum, int n, double x);

}  // namespace stringspectra
