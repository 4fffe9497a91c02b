#include "stringspectra/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <utility>

namespace stringspectra {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

/// Denominator magnitude below which the closed form loses too many digits
/// and the sine-sum fallback takes over.
constexpr double kNodeGuard = 1e-6;

/// s_k(x) through the defining sum (2/N) sum_n sin(n theta) sin(n theta_k);
/// free of removable singularities, O(N) per call.
double lsf_by_sum(int k, const LsfGrid& grid, double x) {
  const int n = grid.n();
  const double l = grid.half_length();
  const double theta = kPi * (x + l) / (2.0 * l);
  const double theta_k = kPi * (static_cast<double>(k) / n + 0.5);
  double acc = 0.0;
  for (int m = 1; m <= n; ++m)
    acc += std::sin(m * theta) * std::sin(m * theta_k);
  return 2.0 * acc / n;
}

}  // namespace

LsfGrid::LsfGrid(int n, double half_length) : n_(n), half_length_(half_length) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("collocation grid needs even N >= 8");
  if (!(half_length > 0))
    throw std::invalid_argument("half length must be positive");
  std::vector<double> pts(n - 1);
  sin_.resize(n - 1);
  cos_.resize(n - 1);
  for (int p = 0; p < n - 1; ++p) {
    const int k = p + 1 - n / 2;
    pts[p] = 2.0 * half_length * k / n;
    sin_[p] = std::sin(kPi * k / n);
    cos_[p] = std::cos(kPi * k / n);
  }
  interior_ = std::make_shared<const Grid>(std::move(pts));
}

double LsfGrid::point(int k) const {
  if (k < min_index() || k > max_index())
    throw std::out_of_range("grid index out of range");
  return 2.0 * half_length_ * k / n_;
}

double lsf_value(int k, const LsfGrid& grid, double x) {
  if (k < grid.min_index() || k > grid.max_index())
    throw std::out_of_range("grid index out of range");
  const double l = grid.half_length();
  if (x < -l - 1e-12 || x > l + 1e-12)
    throw std::domain_error("basis evaluated outside [-L, L]");
  x = std::clamp(x, -l, l);
  const int n = grid.n();
  const int p = k - 1 + n / 2;
  const double denom = std::sin(kPi * x / (2.0 * l)) - grid.sin_table(p);
  if (std::abs(denom) < kNodeGuard) return lsf_by_sum(k, grid, x);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign / n * grid.cos_table(p) * std::sin(n * kPi * x / (2.0 * l)) / denom;
}

DerivativeMatrix::DerivativeMatrix(int n, double half_length)
    : n_(n), half_length_(half_length), entries_(static_cast<std::size_t>(n - 1)) {
  // The sine sum for c2 reduces to the lattice sum
  //   T(m) = sum_{j=1}^{N-1} j^2 cos(j pi m / N),
  // which has the closed form below (T(m) = T(2N-m), parity-signed).
  const int order = n - 1;
  std::vector<double> t(2 * order + 1);
  t[0] = static_cast<double>(n - 1) * n * (2.0 * n - 1.0) / 6.0;
  for (int m = 1; m <= 2 * order; ++m) {
    const int folded = std::min(m, 2 * n - m);
    const double cot = 1.0 / std::tan(kPi * folded / (2.0 * n));
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    t[m] = sign * 0.5 * n * (n - 1.0 - cot * cot);
  }
  const double scale =
      -(1.0 / n) * (kPi / (2.0 * half_length)) * (kPi / (2.0 * half_length));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b <= a; ++b)
      entries_.at(a, b) = scale * (t[a - b] - t[a + b + 2]);
}

std::vector<double> DerivativeMatrix::apply(const std::vector<double>& f) const {
  if (f.size() != static_cast<std::size_t>(order()))
    throw std::invalid_argument("sample vector does not match grid order");
  std::vector<double> out(f.size(), 0.0);
  const std::size_t m = f.size();
  for (std::size_t a = 0; a < m; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < m; ++b) acc += entries_.at(a, b) * f[b];
    out[a] = acc;
  }
  return out;
}

std::shared_ptr<const DerivativeMatrix> second_derivative_matrix(
    const LsfGrid& grid) {
  static std::shared_mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const DerivativeMatrix>>
      cache;
  const auto key = std::make_pair(grid.n(), grid.half_length());
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::unique_lock lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto built =
      std::make_shared<const DerivativeMatrix>(grid.n(), grid.half_length());
  cache.emplace(key, built);
  return built;
}

SymmetricMatrix assemble_symmetrized(const SampledDensity& density,
                                     const LsfGrid& grid) {
  const auto& pts = grid.interior_grid()->points();
  if (density.grid != grid.interior_grid()) {
    if (!density.grid || density.grid->size() != pts.size())
      throw std::invalid_argument("density samples do not match the grid");
    const auto& dp = density.grid->points();
    const std::size_t stride = pts.size() / 7 + 1;
    for (std::size_t i = 0; i < pts.size(); i += stride)
      if (std::abs(dp[i] - pts[i]) > 1e-14)
        throw std::invalid_argument("density samples do not match the grid");
  }
  const auto c2 = second_derivative_matrix(grid);
  const std::size_t m = pts.size();
  SymmetricMatrix o(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      o.at(a, b) =
          -c2->at(a, b) / (density.sqrt_values[a] * density.sqrt_values[b]);
  return o;
}

CollocationSpectrum solve_spectrum(const DensityProfile& density, int n,
                                   int n_modes) {
  LsfGrid grid(n, density.half_length());
  if (n_modes < 1 || n_modes > grid.size())
    throw std::invalid_argument("n_modes must lie in [1, N-1]");
  const SampledDensity rho = sample_density(density, grid.interior_grid());

  // The derivative matrix diagonalizes exactly in the discrete sine basis,
  // so the inverse of the symmetrized operator has the closed factorization
  //   O^{-1} = W S Lambda^{-1} S^T W = F F^T,
  //   W = diag(sqrt(rho)),  S[k][m] = sqrt(2/N) sin((m+1)(k+1) pi / N),
  //   F = W S Lambda^{-1/2}.
  // Diagonalizing O^{-1} and keeping its LARGEST eigenvalues reaches the low
  // energies at working precision. The assembled operator itself has norm
  // ~ (N pi / 2L)^2 / rho_min, so diagonalizing it directly leaks an
  // absolute eigenvalue error of that scale into the small end of the
  // spectrum (at N = 2000 on a strongly peaked density this costs more
  // digits than the discretization does).
  const std::size_t m = static_cast<std::size_t>(grid.size());
  const int nn = grid.n();
  const double l = grid.half_length();
  std::vector<double> factor(m * m);
  const double root = std::sqrt(2.0 / nn);
  for (std::size_t col = 0; col < m; ++col) {
    // one column per sine frequency m+1; 1/sqrt(lambda) = 2L/((m+1) pi)
    const double inv_freq = 2.0 * l / (static_cast<double>(col + 1) * kPi);
    double* out_col = factor.data() + col * m;
    for (std::size_t row = 0; row < m; ++row) {
      const long long phase =
          static_cast<long long>(row + 1) * static_cast<long long>(col + 1) %
          (2LL * nn);
      const double s = std::sin(kPi * static_cast<double>(phase) / nn);
      out_col[row] = rho.sqrt_values[row] * root * s * inv_freq;
    }
  }
  const SymmetricMatrix inv_op = gram_lower(factor, m);
  factor.clear();
  factor.shrink_to_fit();
  const EigenDecomposition eig = eigensolve_symmetric(inv_op);

  CollocationSpectrum out{grid, density, {}, {}, {}, rho.sqrt_values};
  const double inv_sqrt_h = 1.0 / std::sqrt(grid.spacing());
  out.energies.reserve(n_modes);
  out.residual_norms.reserve(n_modes);
  out.modes.reserve(n_modes);
  for (int j = 0; j < n_modes; ++j) {
    // largest eigenvalue of the inverse <-> lowest energy
    const std::size_t src = eig.order - 1 - static_cast<std::size_t>(j);
    out.energies.push_back(1.0 / eig.eigenvalues[src]);
    out.residual_norms.push_back(eig.residual_norms[src]);
    const double* phi = eig.vector(src);
    std::vector<double> psi(m);
    for (std::size_t p = 0; p < m; ++p)
      psi[p] = phi[p] * inv_sqrt_h / rho.sqrt_values[p];
    std::size_t lead = 0;
    while (lead + 1 < m && psi[lead] == 0.0) ++lead;
    if (psi[lead] < 0)
      for (double& v : psi) v = -v;
    out.modes.push_back(std::move(psi));
  }
  return out;
}

double interpolate_mode(const CollocationSpectrum& spectrum, int n, double x) {
  if (n < 1 || n > spectrum.n_modes())
    throw std::out_of_range("mode index out of range");
  const LsfGrid& grid = spectrum.grid;
  const double l = grid.half_length();
  if (x < -l - 1e-12 || x > l + 1e-12)
    throw std::domain_error("mode evaluated outside [-L, L]");
  x = std::clamp(x, -l, l);
  const auto& psi = spectrum.modes[static_cast<std::size_t>(n - 1)];
  const int nn = grid.n();
  const double s_fast = std::sin(nn * kPi * x / (2.0 * l));
  const double s_slow = std::sin(kPi * x / (2.0 * l));
  double acc = 0.0;
  for (int p = 0; p < grid.size(); ++p) {
    const int k = grid.index_of(p);
    const double denom = s_slow - grid.sin_table(p);
    double s;
    if (std::abs(denom) < kNodeGuard) {
      s = lsf_by_sum(k, grid, x);
    } else {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      s = sign / nn * grid.cos_table(p) * s_fast / denom;
    }
    acc += psi[static_cast<std::size_t>(p)] *
           spectrum.sqrt_density[static_cast<std::size_t>(p)] * s;
  }
  return acc / spectrum.density.sqrt_at(x);
}

}  // namespace stringspectra
