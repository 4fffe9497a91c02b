#include "stringspectra/perturbation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stringspectra/quadrature.hpp"

namespace stringspectra {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTailThreshold = 1e-8;

void require_mode_headroom(int n, int k_max) {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  if (n > k_max / 2)
    throw std::invalid_argument(
        "mode " + std::to_string(n) + " needs k_max >= " + std::to_string(2 * n) +
        " for intermediate-state headroom");
}

// Adaptive Simpson stops once two refinement levels agree, and its first
// levels sample [a, b] only at dyadic points. An integrand whose oscillation
// completes a whole number of periods between neighbouring samples looks
// smooth at those points and the recursion can terminate on the aliased
// value. Splitting into one panel per half-oscillation beforehand removes
// every such resonance.
QuadratureResult integrate_oscillatory(const std::function<double(double)>& f,
                                       double a, double b, int half_periods,
                                       double abs_tol) {
  const int panels = (half_periods > 1) ? half_periods : 1;
  QuadratureResult total;
  for (int j = 0; j < panels; ++j) {
    const double x0 = a + (b - a) * j / panels;
    const double x1 = a + (b - a) * (j + 1) / panels;
    const auto r = adaptive_simpson(f, x0, x1, abs_tol / panels);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.converged = total.converged && r.converged;
  }
  return total;
}

}  // namespace

double PTBasis::epsilon(int n) const {
  const double num = n * kPi;
  return num * num / (4.0 * half_length * half_length);
}

double PTBasis::psi(int n, double x) const {
  return std::sin(n * kPi * (x + half_length) / (2.0 * half_length)) /
         std::sqrt(half_length);
}

FrequencyDenominators::FrequencyDenominators(const PTBasis& basis)
    : scale(kPi * kPi / (4.0 * basis.half_length * basis.half_length)) {}

SigmaMatrix::SigmaMatrix(const DensityProfile& profile, int k_max)
    : k_max_(k_max),
      rho0_(profile.moments().rho0),
      half_length_(profile.half_length()) {
  if (k_max < 2) throw std::invalid_argument("k_max must be >= 2");
  build_moments([&](double x) { return profile.sigma(x); });
}

SigmaMatrix::SigmaMatrix(const std::function<double(double)>& sigma_fn,
                         double half_length, int k_max)
    : k_max_(k_max), rho0_(1.0), half_length_(half_length) {
  if (k_max < 2) throw std::invalid_argument("k_max must be >= 2");
  if (half_length <= 0.0)
    throw std::invalid_argument("half_length must be positive");
  build_moments(sigma_fn);
}

void SigmaMatrix::build_moments(const std::function<double(double)>& sigma_fn) {
  const double l = half_length_;
  moments_.resize(static_cast<std::size_t>(2 * k_max_) + 1);
  for (int m = 0; m <= 2 * k_max_; ++m) {
    const auto r = integrate_oscillatory(
        [&](double x) {
          return std::cos(m * kPi * (x + l) / (2.0 * l)) * sigma_fn(x);
        },
        -l, l, m, 1e-12);
    if (!r.converged) {
      // Each moment m feeds the elements with n + k = m or |n - k| = m;
      // name the lowest-index one.
      const int n = (m >= 2) ? m - 1 : (m == 1 ? 2 : 1);
      const int k = 1;
      throw std::runtime_error(
          "sigma-matrix quadrature did not converge for element (" +
          std::to_string(n) + ", " + std::to_string(k) + ")");
    }
    moments_[static_cast<std::size_t>(m)] = r.value;
    max_error_ = std::max(max_error_, r.error_estimate);
  }
}

double SigmaMatrix::at(int n, int k) const {
  if (n < 1 || n > k_max_ || k < 1 || k > k_max_)
    throw std::out_of_range("sigma-matrix index out of range");
  const int diff = (n > k) ? n - k : k - n;
  return (moments_[static_cast<std::size_t>(diff)] -
          moments_[static_cast<std::size_t>(n + k)]) /
         (2.0 * half_length_);
}

SigmaMatrix sigma_matrix(const DensityProfile& profile, int k_max) {
  return SigmaMatrix(profile, k_max);
}

PTReport pt_energy(int n, int order, const SigmaMatrix& sigma,
                   const PTBasis& basis) {
  if (order < 0 || order > 3)
    throw std::invalid_argument("order must lie in 0..3");
  if (basis.k_max > sigma.k_max())
    throw std::invalid_argument("basis k_max exceeds the sigma-matrix table");
  require_mode_headroom(n, basis.k_max);

  const int k_max = basis.k_max;
  const double eps_n = basis.epsilon(n);
  const double rho0 = sigma.rho0();
  const double s_nn = sigma.at(n, n);
  const FrequencyDenominators omega(basis);

  PTReport report;
  report.mode = n;
  report.order = order;
  report.rho0 = rho0;
  report.corrections.push_back(eps_n / rho0);

  // The tail accumulators sum |term| over the last index octave
  // (k > k_max/2): for 1/k^2-decaying matrix elements that octave sum is a
  // faithful stand-in for the k > k_max remainder that was dropped.
  const int octave_start = k_max / 2 + 1;
  double tail = 0.0;
  if (order >= 1) report.corrections.push_back(-eps_n * s_nn / rho0);
  if (order >= 2) {
    double mix = 0.0, octave = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      if (k == n) continue;
      const double s = sigma.at(n, k);
      const double term = s * s / omega.omega(n, k);
      mix += term;
      if (k >= octave_start) octave += std::abs(term);
    }
    report.corrections.push_back((eps_n * s_nn * s_nn + eps_n * eps_n * mix) /
                                 rho0);
    tail = std::max(tail, std::abs(eps_n * eps_n / rho0) * octave);
  }
  if (order >= 3) {
    double mix1 = 0.0, mix2 = 0.0, octave1 = 0.0, octave2 = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      if (k == n) continue;
      const double s = sigma.at(n, k);
      const double w = omega.omega(n, k);
      const double term1 = s * s / (w * w);
      const double term2 = s * s / w;
      mix1 += term1;
      mix2 += term2;
      if (k >= octave_start) {
        octave1 += std::abs(term1);
        octave2 += std::abs(term2);
      }
    }
    double dbl = 0.0, octave_dbl = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      if (k == n) continue;
      const double w_nk = omega.omega(n, k);
      const double s_nk = sigma.at(n, k);
      for (int m = 1; m <= k_max; ++m) {
        if (m == n) continue;
        const double term = s_nk * sigma.at(k, m) * sigma.at(m, n) /
                            (w_nk * omega.omega(n, m));
        dbl += term;
        if (k >= octave_start || m >= octave_start)
          octave_dbl += std::abs(term);
      }
    }
    const double e3 = eps_n * eps_n * eps_n;
    report.corrections.push_back(
        (-eps_n * s_nn * s_nn * s_nn + e3 * s_nn * mix1 -
         3.0 * eps_n * eps_n * s_nn * mix2 - e3 * dbl) /
        rho0);
    tail = std::max(tail, std::abs(e3 * s_nn / rho0) * octave1);
    tail = std::max(tail,
                    std::abs(3.0 * eps_n * eps_n * s_nn / rho0) * octave2);
    tail = std::max(tail, std::abs(e3 / rho0) * octave_dbl);
  }

  double running = 0.0;
  for (double c : report.corrections) {
    running += c;
    report.partial_sums.push_back(running);
  }
  report.resummed = eps_n / (rho0 * (1.0 + s_nn));
  report.tail_estimate = tail / report.corrections.front();
  report.tail_warning = report.tail_estimate > kTailThreshold;
  return report;
}

double resummed_energy(int n, const DensityProfile& profile,
                       const PTBasis& basis) {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  // psi_n^2 oscillates through 2n half-periods across the interval
  const auto diag = integrate_oscillatory(
      [&](double x) {
        const double p = basis.psi(n, x);
        return p * p * profile(x);
      },
      -profile.half_length(), profile.half_length(), 2 * n, 1e-12);
  if (!diag.converged)
    throw std::runtime_error("diagonal density element quadrature did not converge");
  return basis.epsilon(n) / diag.value;
}

double pt_wavefunction_first_order(int n, const SigmaMatrix& sigma,
                                   const PTBasis& basis, double x) {
  if (basis.k_max > sigma.k_max())
    throw std::invalid_argument("basis k_max exceeds the sigma-matrix table");
  require_mode_headroom(n, basis.k_max);
  const double eps_n = basis.epsilon(n);
  double value = basis.psi(n, x);
  for (int k = 1; k <= basis.k_max; ++k) {
    if (k == n) continue;
    const double eps_k = basis.epsilon(k);
    const double coeff =
        -0.5 * sigma.at(k, n) * (eps_n + eps_k) / (eps_n - eps_k);
    value += coeff * basis.psi(k, x);
  }
  return value;
}

double asymptotic_second_order(const DensityProfile& profile) {
  const DensityMoments& m = profile.moments();
  return asymptotic_second_order(m.mean_sigma, m.mean_sigma_sq);
}

double asymptotic_second_order(double mean_sigma, double mean_sigma_sq) {
  return 0.25 * mean_sigma_sq + 0.75 * mean_sigma * mean_sigma;
}

}  // namespace stringspectra
