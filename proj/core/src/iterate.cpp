#include "stringspectra/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "stringspectra/linalg.hpp"
#include "stringspectra/roots.hpp"

namespace stringspectra {

namespace {

void require_shared(const GridPtr& a, const GridPtr& b) {
  if (a == b) return;
  if (!a || !b || a->points() != b->points())
    throw std::invalid_argument("samples must share one quadrature grid");
}

/// First derivative of samples: 4th-order stencils on uniform grids
/// (centered inside, one-sided at the ends), 3-point non-uniform otherwise.
std::vector<double> first_derivative(const std::vector<double>& y, const Grid& g) {
  const auto& x = g.points();
  const std::size_t n = y.size();
  std::vector<double> d(n);
  if (g.is_uniform() && n >= 5) {
    const double h = g.spacing();
    for (std::size_t i = 2; i + 2 < n; ++i)
      d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) /
           (12.0 * h);
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) /
           (12.0 * h);
    d[n - 1] = -(-25.0 * y[n - 1] + 48.0 * y[n - 2] - 36.0 * y[n - 3] +
                 16.0 * y[n - 4] - 3.0 * y[n - 5]) /
               (12.0 * h);
    d[n - 2] = -(-3.0 * y[n - 1] - 10.0 * y[n - 2] + 18.0 * y[n - 3] -
                 6.0 * y[n - 4] + y[n - 5]) /
               (12.0 * h);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
           h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  d[0] = (y[1] - y[0]) / (x[1] - x[0]);
  d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  return d;
}

double trapezoid_product(const std::vector<double>& f, const std::vector<double>& g,
                         const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (f[i] * g[i] + f[i - 1] * g[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

struct StepDetail {
  SampledFunction xi;  // unit L2 norm
  double kappa = 0.0;
  double norm_factor = 0.0;
  /// <xi_n, xi_{n-1}> / norm_factor: the Rayleigh quotient of xi_n under the
  /// integral operator, exact up to quadrature (no differencing involved).
  double pair_energy = 0.0;
};

StepDetail contraction_step(const SampledFunction& prev,
                            const SampledDensity& density) {
  require_shared(prev.grid, density.grid);
  const auto& x = prev.grid->points();
  const std::size_t n = x.size();
  std::vector<double> weighted(n);
  for (std::size_t i = 0; i < n; ++i)
    weighted[i] = density.sqrt_values[i] * prev.values[i];
  SampledFunction g = cumulative_integral(SampledFunction(prev.grid, std::move(weighted)));
  const double kappa = integrate(g) / (x.back() - x.front());
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) integrand[i] = kappa - g.values[i];
  SampledFunction u = cumulative_integral(SampledFunction(prev.grid, std::move(integrand)));
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i)
    next[i] = density.sqrt_values[i] * u.values[i];
  StepDetail out;
  out.xi = SampledFunction(prev.grid, std::move(next));
  out.kappa = kappa;
  out.norm_factor = normalize_l2(out.xi);
  out.pair_energy = inner_product(out.xi, prev) / out.norm_factor;
  return out;
}

double boundary_residual_of(const SampledFunction& f) {
  return std::max(std::abs(f.values.front()), std::abs(f.values.back()));
}

SampledFunction physical_mode(const SampledFunction& xi,
                              const SampledDensity& density) {
  std::vector<double> psi(xi.values.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    psi[i] = xi.values[i] / density.sqrt_values[i];
  return SampledFunction(xi.grid, std::move(psi));
}

}  // namespace

SampledFunction theorem1_step(const SampledFunction& prev,
                              const SampledDensity& density) {
  return contraction_step(prev, density).xi;
}

double rayleigh_quotient(const SampledFunction& f, const SampledDensity& density) {
  require_shared(f.grid, density.grid);
  const auto& x = f.grid->points();
  const std::size_t n = x.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = f.values[i] / density.sqrt_values[i];
  const std::vector<double> du = first_derivative(u, *f.grid);
  const double num = trapezoid_product(du, du, x);
  const double den = inner_product(f, f);
  if (!(den > 0))
    throw std::invalid_argument("Rayleigh quotient of a zero-norm function");
  return num / den;
}

IterationResult theorem1_solve(const SampledFunction& xi0,
                               const SampledDensity& density, double tol,
                               int max_iter) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  SampledFunction xi = xi0;
  normalize_l2(xi);
  IterationResult result;
  result.trace.reserve(static_cast<std::size_t>(max_iter));
  double prev_energy = std::numeric_limits<double>::quiet_NaN();
  double last_delta = std::numeric_limits<double>::quiet_NaN();
  for (int j = 1; j <= max_iter; ++j) {
    StepDetail st = contraction_step(xi, density);
    xi = st.xi;
    result.trace.push_back(IterationTrace{j, xi, st.kappa, st.pair_energy,
                                          st.norm_factor,
                                          boundary_residual_of(xi)});
    if (j > 1) {
      last_delta = std::abs(st.pair_energy - prev_energy) /
                   std::max(1.0, std::abs(st.pair_energy));
      if (last_delta <= tol) {
        result.converged = true;
        prev_energy = st.pair_energy;
        break;
      }
    }
    prev_energy = st.pair_energy;
  }
  result.mode.energy = result.trace.back().rayleigh;
  result.mode.mode = physical_mode(xi, density);
  result.mode.converged = result.converged;
  result.mode.residual = last_delta;
  result.mode.method = "iterate";
  return result;
}

TrialSet::TrialSet(std::vector<SampledFunction> functions,
                   const SampledDensity& density)
    : functions_(std::move(functions)) {
  if (functions_.empty()) throw std::invalid_argument("trial set is empty");
  energies_.resize(functions_.size());
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    require_shared(functions_[i].grid, density.grid);
    if (!(norm_l2(functions_[i]) > 0))
      throw std::invalid_argument("trial " + std::to_string(i) +
                                  " has zero norm");
    normalize_l2(functions_[i]);
    energies_[i] = rayleigh_quotient(functions_[i], density);
  }
  std::vector<std::size_t> order(functions_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return energies_[a] < energies_[b];
  });
  std::vector<SampledFunction> sorted_f;
  std::vector<double> sorted_e;
  sorted_f.reserve(order.size());
  sorted_e.reserve(order.size());
  for (std::size_t i : order) {
    sorted_f.push_back(std::move(functions_[i]));
    sorted_e.push_back(energies_[i]);
  }
  functions_ = std::move(sorted_f);
  energies_ = std::move(sorted_e);
}

std::vector<SampledFunction> gegenbauer_trials(int count, const GridPtr& grid) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (std::abs(grid->front() + 0.5) > 1e-12 || std::abs(grid->back() - 0.5) > 1e-12)
    throw std::invalid_argument(
        "the weighted Gegenbauer family is defined on [-1/2, 1/2]");
  const std::size_t m = grid->size();
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(count),
                                        std::vector<double>(m));
  // Ultraspherical three-term recurrence at lambda = 5/2:
  //   m C_m = 2 t (m + 3/2) C_{m-1} - (m + 3) C_{m-2}.
  std::vector<double> c(static_cast<std::size_t>(count) + 2);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid->points()[i];
    const double t = 2.0 * x;
    c[0] = 1.0;
    if (count + 1 >= 1) c[1] = 5.0 * t;
    for (int k = 2; k <= count + 1; ++k)
      c[static_cast<std::size_t>(k)] =
          (2.0 * t * (k + 1.5) * c[static_cast<std::size_t>(k - 1)] -
           (k + 3.0) * c[static_cast<std::size_t>(k - 2)]) /
          k;
    const double weight = 3.0 * std::sqrt(2.0) * (1.0 - 4.0 * x * x);
    for (int n = 0; n < count; ++n) {
      const double norm =
          std::sqrt((n + 3.5) / ((n + 2.0) * (n + 3.0) * (n + 4.0) * (n + 5.0)));
      vals[static_cast<std::size_t>(n)][i] =
          weight * c[static_cast<std::size_t>(n + 1)] * norm;
    }
  }
  std::vector<SampledFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (auto& v : vals) out.emplace_back(grid, std::move(v));
  return out;
}

namespace {

/// Classical Gram-Schmidt against the already-accepted members, run twice to
/// scrub the round-off the first pass leaves behind.
std::vector<SampledFunction> orthonormalize_twice(std::vector<SampledFunction> block) {
  std::vector<SampledFunction> out;
  out.reserve(block.size());
  for (std::size_t j = 0; j < block.size(); ++j) {
    SampledFunction w = std::move(block[j]);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : out) {
        const double proj = inner_product(w, u);
        for (std::size_t i = 0; i < w.values.size(); ++i)
          w.values[i] -= proj * u.values[i];
      }
    const double nrm = norm_l2(w);
    if (nrm < 1e-8)
      throw std::runtime_error("orthogonalization rank loss at trial index " +
                               std::to_string(j));
    for (double& v : w.values) v /= nrm;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

std::vector<ModeSolution> theorem2_block(const TrialSet& trials,
                                         const SampledDensity& density,
                                         int iterations) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  std::vector<SampledFunction> block = trials.functions();
  std::vector<double> energies = trials.ordering_energies();
  std::vector<double> previous_energies;
  for (int sweep = 0; sweep < iterations; ++sweep) {
    std::vector<SampledFunction> stepped;
    stepped.reserve(block.size());
    for (const auto& v : block) stepped.push_back(theorem1_step(v, density));
    block = orthonormalize_twice(std::move(stepped));
    previous_energies = std::move(energies);
    energies.clear();
    for (const auto& v : block) energies.push_back(rayleigh_quotient(v, density));
    std::vector<std::size_t> order(block.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return energies[a] < energies[b];
                     });
    std::vector<SampledFunction> sorted_b;
    std::vector<double> sorted_e;
    for (std::size_t i : order) {
      sorted_b.push_back(std::move(block[i]));
      sorted_e.push_back(energies[i]);
    }
    block = std::move(sorted_b);
    energies = std::move(sorted_e);
  }
  std::vector<ModeSolution> out;
  out.reserve(block.size());
  for (std::size_t j = 0; j < block.size(); ++j) {
    ModeSolution mode;
    mode.energy = energies[j];
    mode.mode = physical_mode(block[j], density);
    mode.converged = true;
    mode.residual =
        (j < previous_energies.size())
            ? std::abs(energies[j] - previous_energies[j]) /
                  std::max(1.0, std::abs(energies[j]))
            : 0.0;
    mode.method = "block";
    out.push_back(std::move(mode));
  }
  return out;
}

std::vector<ModeSolution> gep_from_trials(const TrialSet& trials,
                                          const SampledDensity& density) {
  const std::size_t m = trials.size();
  const auto& x = density.grid->points();
  std::vector<SampledFunction> stepped;
  stepped.reserve(m);
  for (const auto& t : trials.functions())
    stepped.push_back(theorem1_step(t, density));
  std::vector<std::vector<double>> du(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> u(x.size());
    for (std::size_t p = 0; p < x.size(); ++p)
      u[p] = stepped[i].values[p] / density.sqrt_values[p];
    du[i] = first_derivative(u, *density.grid);
  }
  SymmetricMatrix a(m), b(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      a.at(i, j) = trapezoid_product(du[i], du[j], x);
      b.at(i, j) = inner_product(stepped[i], stepped[j]);
    }
  const EigenDecomposition eig = eigensolve_generalized(a, b);
  std::vector<ModeSolution> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> combo(x.size(), 0.0);
    const double* c = eig.vector(j);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < x.size(); ++p)
        combo[p] += c[i] * stepped[i].values[p];
    SampledFunction xi(density.grid, std::move(combo));
    normalize_l2(xi);
    ModeSolution mode;
    mode.energy = eig.eigenvalues[j];
    mode.mode = physical_mode(xi, density);
    mode.converged = true;
    mode.residual = eig.residual_norms[j];
    mode.method = "gep";
    out.push_back(std::move(mode));
  }
  return out;
}

std::vector<ModeSolution> krylov_gep(const SampledFunction& xi0,
                                     const SampledDensity& density, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  std::vector<SampledFunction> orbit;
  orbit.reserve(static_cast<std::size_t>(depth));
  SampledFunction cur = xi0;
  normalize_l2(cur);
  orbit.push_back(cur);
  for (int d = 2; d <= depth; ++d) {
    cur = theorem1_step(cur, density);
    orbit.push_back(cur);
  }
  try {
    auto modes = gep_from_trials(TrialSet(std::move(orbit), density), density);
    for (auto& mode : modes) mode.method = "krylov";
    return modes;
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string(e.what()) + " (Krylov depth " +
                             std::to_string(depth) + ")");
  }
}

VariationalResult variational_solve(
    const std::function<double(double, double)>& family,
    const SampledDensity& density, double scan_min, double scan_max) {
  if (!(scan_max > scan_min))
    throw std::invalid_argument("scan interval is empty");
  const GridPtr& grid = density.grid;
  auto objective = [&](double upsilon) {
    SampledFunction xi0 = SampledFunction::from(
        grid, [&](double x) { return family(x, upsilon); });
    normalize_l2(xi0);
    return rayleigh_quotient(theorem1_step(xi0, density), density);
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = scan_min, b = scan_max;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 80 && (b - a) > 1e-12 * (scan_max - scan_min); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  VariationalResult result;
  result.upsilon = 0.5 * (a + b);
  result.energy = objective(result.upsilon);
  if (scan_min <= 0.0 && 0.0 <= scan_max) {
    const double at_zero = objective(0.0);
    if (at_zero <= result.energy + 1e-12 * std::max(1.0, std::abs(result.energy))) {
      result.upsilon = 0.0;
      result.energy = at_zero;
    }
  }
  return result;
}

SampledFunction theorem3_step(const SampledFunction& prev,
                              const SampledDensity& density, double l_prime) {
  require_shared(prev.grid, density.grid);
  const auto& x = prev.grid->points();
  if (!(l_prime > x.front()) || l_prime > x.back() + 1e-12)
    throw std::out_of_range("restriction point must lie in (-L, L]");
  l_prime = std::min(l_prime, x.back());
  const std::size_t n = x.size();
  std::vector<double> weighted(n);
  for (std::size_t i = 0; i < n; ++i)
    weighted[i] = density.sqrt_values[i] * prev.values[i];
  SampledFunction g =
      cumulative_integral(SampledFunction(prev.grid, std::move(weighted)));
  SampledFunction f = cumulative_integral(g);
  const double f_at_lp = (l_prime >= x.back()) ? f.values.back()
                                               : interpolate_value(f, l_prime);
  const double kappa = f_at_lp / (l_prime - x.front());
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) integrand[i] = kappa - g.values[i];
  SampledFunction u =
      cumulative_integral(SampledFunction(prev.grid, std::move(integrand)));
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i)
    next[i] = density.sqrt_values[i] * u.values[i];
  return SampledFunction(prev.grid, std::move(next));
}

namespace {

ShootingResult run_restricted(const SampledDensity& rho,
                              const std::function<double(double, double)>& eta0,
                              double l_prime, int n_iter, bool fix_sign) {
  const GridPtr& grid = rho.grid;
  SampledFunction eta =
      SampledFunction::from(grid, [&](double x) { return eta0(x, l_prime); });
  normalize_l2(eta);
  double energy = 0.0;
  for (int i = 0; i < n_iter; ++i) {
    SampledFunction raw = theorem3_step(eta, rho, l_prime);
    const double s = normalize_l2(raw);
    energy = inner_product(raw, eta) / s;
    eta = std::move(raw);
  }
  if (fix_sign && eta.values.size() > 1 && eta.values[1] < 0)
    for (double& v : eta.values) v = -v;
  ShootingResult r;
  r.l_prime = l_prime;
  r.iterations = n_iter;
  r.boundary_residual = eta.values.back();
  r.energy = energy;
  r.mode = physical_mode(eta, rho);
  return r;
}

}  // namespace

std::vector<ShootingResult> shoot_excited(
    const DensityProfile& density, const GridPtr& grid,
    const std::function<double(double, double)>& eta0, int n_iter,
    int scan_points, double tol) {
  if (n_iter < 1) throw std::invalid_argument("n_iter must be >= 1");
  const SampledDensity rho = sample_density(density, grid);
  std::vector<ShootingResult> out;
  out.push_back(run_restricted(rho, eta0, grid->back(), n_iter, true));
  const double span = grid->back() - grid->front();
  const double lo = grid->front() + 0.01 * span;
  const double hi = grid->back() - 0.01 * span;
  auto residual = [&](double lp) {
    return run_restricted(rho, eta0, lp, n_iter, false).boundary_residual;
  };
  for (double root : find_roots(residual, lo, hi, scan_points, tol))
    out.push_back(run_restricted(rho, eta0, root, n_iter, true));
  std::sort(out.begin(), out.end(),
            [](const ShootingResult& a, const ShootingResult& b) {
              return a.energy < b.energy;
            });
  return out;
}

std::vector<ShootingResult> shoot_excited(const DensityProfile& density,
                                          int n_iter, int scan_points,
                                          double tol) {
  const double l = density.half_length();
  const GridPtr grid = Grid::uniform(-l, l, 20001);
  auto bridge = [l](double x, double lp) { return (x + l) * (lp - x); };
  return shoot_excited(density, grid, bridge, n_iter, scan_points, tol);
}

}  // namespace stringspectra
