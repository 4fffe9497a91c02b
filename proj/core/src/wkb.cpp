#include "stringspectra/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stringspectra {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

PhaseIntegral::PhaseIntegral(const DensityProfile& profile, int cells)
    : l_(profile.half_length()) {
  if (cells < 16) throw std::invalid_argument("phase table needs >= 16 cells");
  h_ = 2.0 * l_ / cells;
  phi_.resize(static_cast<std::size_t>(cells) + 1);
  slope_.resize(phi_.size());
  phi_[0] = 0.0;
  slope_[0] = profile.sqrt_at(-l_);
  for (int i = 1; i <= cells; ++i) {
    const double x0 = -l_ + (i - 1) * h_;
    const double x1 = -l_ + i * h_;
    const double mid = profile.sqrt_at(0.5 * (x0 + x1));
    slope_[static_cast<std::size_t>(i)] = profile.sqrt_at(x1);
    phi_[static_cast<std::size_t>(i)] =
        phi_[static_cast<std::size_t>(i - 1)] +
        h_ / 6.0 *
            (slope_[static_cast<std::size_t>(i - 1)] + 4.0 * mid +
             slope_[static_cast<std::size_t>(i)]);
  }
}

double PhaseIntegral::operator()(double x) const {
  if (x < -l_ - 1e-12 || x > l_ + 1e-12)
    throw std::domain_error("phase evaluated outside [-L, L]");
  x = std::clamp(x, -l_, l_);
  const std::size_t cells = phi_.size() - 1;
  std::size_t i = static_cast<std::size_t>((x + l_) / h_);
  i = std::min(i, cells - 1);
  const double t = (x - (-l_ + static_cast<double>(i) * h_)) / h_;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * phi_[i] + h_ * h10 * slope_[i] + h01 * phi_[i + 1] +
         h_ * h11 * slope_[i + 1];
}

double wkb_energy(int n, const DensityProfile& profile) {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  const double l = profile.half_length();
  const double mean_sqrt = profile.moments().mean_sqrt;
  const double eps = n * kPi * n * kPi / (4.0 * l * l);
  return eps / (mean_sqrt * mean_sqrt);
}

WkbSolver::WkbSolver(const DensityProfile& profile, int cells)
    : profile_(profile), phase_(profile, cells) {}

double WkbSolver::energy(int n) const { return wkb_energy(n, profile_); }

double WkbSolver::wavefunction(int n, double x) const {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  const double total = phase_.total();
  const double prefactor = std::sqrt(2.0 / total);
  return prefactor * std::pow(profile_(x), -0.25) *
         std::sin(n * kPi * phase_(x) / total);
}

double wkb_wavefunction(int n, const DensityProfile& profile, double x) {
  return WkbSolver(profile).wavefunction(n, x);
}

}  // namespace stringspectra
