#include "stringspectra/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stringspectra {

Grid::Grid(std::vector<double> pts) : x_(std::move(pts)) {
  if (x_.size() < 3) throw std::invalid_argument("grid needs at least 3 points");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("grid points must be strictly increasing");
  const double h0 = x_[1] - x_[0];
  uniform_ = true;
  for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
    if (std::abs((x_[i + 1] - x_[i]) - h0) > 1e-12 * std::abs(h0)) {
      uniform_ = false;
      break;
    }
  }
  spacing_ = uniform_ ? (x_.back() - x_.front()) / double(x_.size() - 1) : 0.0;
}

std::shared_ptr<const Grid> Grid::uniform(double a, double b, std::size_t n) {
  if (!(b > a)) throw std::invalid_argument("grid interval is empty");
  if (n < 3) throw std::invalid_argument("grid needs at least 3 points");
  std::vector<double> pts(n);
  const double h = (b - a) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts[i] = a + h * double(i);
  pts.back() = b;
  return std::make_shared<Grid>(std::move(pts));
}

std::shared_ptr<const Grid> Grid::graded(double a, double b, std::size_t n,
                                         double edge_width, double min_cell,
                                         double edge_fraction) {
  if (!(b > a)) throw std::invalid_argument("grid interval is empty");
  if (n < 64) throw std::invalid_argument("graded grid needs at least 64 points");
  if (!(edge_width > 0) || edge_width * 2 >= (b - a))
    throw std::invalid_argument("edge_width must fit inside the interval");
  if (!(min_cell > 0) || min_cell >= edge_width)
    throw std::invalid_argument("min_cell must be positive and below edge_width");
  if (!(edge_fraction > 0) || edge_fraction >= 0.5)
    throw std::invalid_argument("edge_fraction must lie in (0, 0.5)");

  const std::size_t m_edge = std::max<std::size_t>(16, std::size_t(double(n) * edge_fraction));
  const std::size_t m_mid = (n > 2 * m_edge + 2) ? n - 2 * m_edge : 64;

  // Offsets from an endpoint: geometric from min_cell up to edge_width.
  std::vector<double> t(m_edge);
  const double ratio = std::log(edge_width / min_cell) / double(m_edge - 1);
  for (std::size_t i = 0; i < m_edge; ++i) t[i] = min_cell * std::exp(ratio * double(i));
  t.back() = edge_width;

  std::vector<double> pts;
  pts.reserve(2 * m_edge + m_mid + 2);
  pts.push_back(a);
  for (double off : t) pts.push_back(a + off);
  const double mid_lo = a + edge_width, mid_hi = b - edge_width;
  const double hm = (mid_hi - mid_lo) / double(m_mid - 1);
  for (std::size_t i = 1; i + 1 < m_mid; ++i) pts.push_back(mid_lo + hm * double(i));
  for (std::size_t i = m_edge; i-- > 0;) pts.push_back(b - t[i]);
  pts.push_back(b);

  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return std::make_shared<Grid>(std::move(pts));
}

SampledFunction::SampledFunction(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("sampled function needs a grid");
  if (values.size() != grid->size())
    throw std::invalid_argument("sample count does not match grid size");
}

double integrate(const SampledFunction& f) {
  const auto& x = f.grid->points();
  const auto& y = f.values;
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

SampledFunction cumulative_integral(const SampledFunction& f) {
  const auto& x = f.grid->points();
  const auto& y = f.values;
  std::vector<double> out(x.size());
  out[0] = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return SampledFunction(f.grid, std::move(out));
}

double inner_product(const SampledFunction& f, const SampledFunction& g) {
  if (f.grid != g.grid && f.grid->points() != g.grid->points())
    throw std::invalid_argument("inner product requires a shared grid");
  const auto& x = f.grid->points();
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (f.values[i] * g.values[i] + f.values[i - 1] * g.values[i - 1]) *
         (x[i] - x[i - 1]);
  return s;
}

double norm_l2(const SampledFunction& f) { return std::sqrt(inner_product(f, f)); }

double normalize_l2(SampledFunction& f) {
  const double n = norm_l2(f);
  if (!(n > 0)) throw std::domain_error("cannot normalize a zero function");
  for (double& v : f.values) v /= n;
  return n;
}

double interpolate_value(const SampledFunction& f, double x) {
  const auto& xs = f.grid->points();
  if (x < xs.front() - 1e-14 || x > xs.back() + 1e-14)
    throw std::domain_error("interpolation abscissa outside the grid span");
  x = std::clamp(x, xs.front(), xs.back());
  // locate the cell, then center a 4-point stencil on it
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = (it == xs.begin()) ? 0 : std::size_t(it - xs.begin()) - 1;
  std::size_t lo = (i >= 1) ? i - 1 : 0;
  if (lo + 4 > xs.size()) lo = xs.size() - 4;
  double r = 0.0;
  for (std::size_t j = lo; j < lo + 4; ++j) {
    double w = 1.0;
    for (std::size_t m = lo; m < lo + 4; ++m)
      if (m != j) w *= (x - xs[m]) / (xs[j] - xs[m]);
    r += w * f.values[j];
  }
  return r;
}

}  // namespace stringspectra
