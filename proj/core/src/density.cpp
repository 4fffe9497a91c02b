#include "stringspectra/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stringspectra/expression.hpp"
#include "stringspectra/quadrature.hpp"

namespace stringspectra {

namespace {

constexpr int kPositivitySamples = 1024;

/// Fritsch-Carlson monotone cubic interpolant: stays inside the data range
/// between knots, which keeps strictly positive tables strictly positive.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    m_.resize(n);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
      m_[i] = (d[i - 1] * d[i] > 0) ? 0.5 * (d[i - 1] + d[i]) : 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (d[i] == 0.0) { m_[i] = m_[i + 1] = 0.0; continue; }
      const double a = m_[i] / d[i], b = m_[i + 1] / d[i];
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double t = 3.0 / std::sqrt(s);
        m_[i] = t * a * d[i];
        m_[i + 1] = t * b * d[i];
      }
    }
  }

  double operator()(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * m_[i] + h01 * y_[i + 1] + h * h11 * m_[i + 1];
  }

 private:
  std::vector<double> x_, y_, m_;
};

DensityMoments moments_by_quadrature(const std::function<double(double)>& rho,
                                     double L) {
  auto integral = [&](const std::function<double(double)>& f) {
    const auto r = adaptive_simpson(f, -L, L, 1e-12);
    if (!r.converged)
      throw std::runtime_error(
          "density moment quadrature did not converge (residual estimate " +
          std::to_string(r.error_estimate) + ")");
    return r.value;
  };
  DensityMoments m;
  const double inv = 1.0 / (2.0 * L);
  m.rho0 = inv * integral(rho);
  m.mean_sqrt = inv * integral([&](double x) { return std::sqrt(rho(x)); });
  const double rho0 = m.rho0;
  m.mean_sigma = inv * integral([&](double x) { return rho(x) / rho0 - 1.0; });
  m.mean_sigma_sq = inv * integral([&](double x) {
    const double s = rho(x) / rho0 - 1.0;
    return s * s;
  });
  return m;
}

}  // namespace

void DensityProfile::validate_positive(int samples) const {
  for (int i = 0; i < samples; ++i) {
    const double x = -L_ + 2.0 * L_ * (i + 0.5) / samples;
    const double v = eval_(x);
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::domain_error("density is not strictly positive at x = " +
                              std::to_string(x) + " (value " +
                              std::to_string(v) + ")");
  }
}

DensityProfile DensityProfile::constant(double value, double half_length) {
  if (!(value > 0)) throw std::domain_error("constant density must be positive");
  if (!(half_length > 0)) throw std::domain_error("half length must be positive");
  DensityProfile p;
  p.family_ = DensityFamily::constant;
  p.L_ = half_length;
  p.params_ = {{"value", value}};
  p.label_ = (value == 1.0) ? "constant" : "constant:value=" + std::to_string(value);
  p.eval_ = [value](double) { return value; };
  auto m = std::make_shared<DensityMoments>();
  m->rho0 = value;
  m->mean_sqrt = std::sqrt(value);
  m->mean_sigma = 0.0;
  m->mean_sigma_sq = 0.0;
  p.moments_ = std::move(m);
  return p;
}

DensityProfile DensityProfile::borg(double alpha) {
  if (!(alpha > -1.0))
    throw std::domain_error("borg family requires alpha > -1");
  DensityProfile p;
  p.family_ = DensityFamily::borg;
  p.L_ = 0.5;
  p.params_ = {{"alpha", alpha}};
  {
    std::ostringstream os;
    os << "borg:alpha=" << alpha;
    p.label_ = os.str();
  }
  const double a = alpha;
  p.eval_ = [a](double x) {
    const double d = 1.0 + a * (x + 0.5);
    return (1.0 + a) * (1.0 + a) / (d * d * d * d);
  };
  auto m = std::make_shared<DensityMoments>();
  if (std::abs(a) < 1e-12) {
    m->rho0 = 1.0;
    m->mean_sigma_sq = 0.0;
  } else {
    m->rho0 = (3.0 + 3.0 * a + a * a) / (3.0 * (1.0 + a));
    const double q = 1.0 + a;
    const double mean_rho_sq = std::pow(q, 4) * (1.0 - std::pow(q, -7)) / (7.0 * a);
    m->mean_sigma_sq = mean_rho_sq / (m->rho0 * m->rho0) - 1.0;
  }
  m->mean_sqrt = 1.0;  // closed form: the family preserves \int sqrt(rho)
  m->mean_sigma = 0.0;
  p.moments_ = std::move(m);
  return p;
}

DensityProfile DensityProfile::parabolic(double alpha) {
  if (!(std::abs(alpha) <= 2.0))
    throw std::domain_error("parabolic family requires |alpha| <= 2");
  DensityProfile p;
  p.family_ = DensityFamily::parabolic;
  p.L_ = 0.5;
  p.params_ = {{"alpha", alpha}};
  {
    std::ostringstream os;
    os << "parabolic:alpha=" << alpha;
    p.label_ = os.str();
  }
  const double a = alpha;
  p.eval_ = [a](double x) {
    const double t = 1.0 + a * x;
    return t * t;
  };
  auto m = std::make_shared<DensityMoments>();
  m->rho0 = 1.0 + a * a / 12.0;
  m->mean_sqrt = 1.0;  // \int (1 + a x) dx / (2L) = 1 for |a| <= 2
  m->mean_sigma = 0.0;
  const double mean_rho_sq = 1.0 + a * a / 2.0 + std::pow(a, 4) / 80.0;
  m->mean_sigma_sq = mean_rho_sq / (m->rho0 * m->rho0) - 1.0;
  p.moments_ = std::move(m);
  return p;
}

DensityProfile DensityProfile::linear(double alpha) {
  if (!(std::abs(alpha) < 2.0))
    throw std::domain_error("linear family requires |alpha| < 2");
  DensityProfile p;
  p.family_ = DensityFamily::linear;
  p.L_ = 0.5;
  p.params_ = {{"alpha", alpha}};
  {
    std::ostringstream os;
    os << "linear:alpha=" << alpha;
    p.label_ = os.str();
  }
  const double a = alpha;
  p.eval_ = [a](double x) { return 1.0 + a * x; };
  auto m = std::make_shared<DensityMoments>();
  m->rho0 = 1.0;
  if (std::abs(a) < 1e-12)
    m->mean_sqrt = 1.0;
  else
    m->mean_sqrt = 2.0 / (3.0 * a) *
                   (std::pow(1.0 + 0.5 * a, 1.5) - std::pow(1.0 - 0.5 * a, 1.5));
  m->mean_sigma = 0.0;
  m->mean_sigma_sq = a * a / 12.0;
  p.moments_ = std::move(m);
  return p;
}

DensityProfile DensityProfile::expression(const std::string& text,
                                          double half_length) {
  Expression e = Expression::parse(text);
  return expression([e](double x) { return e(x); }, text, half_length);
}

DensityProfile DensityProfile::expression(std::function<double(double)> fn,
                                          const std::string& label,
                                          double half_length,
                                          std::map<std::string, double> params) {
  if (!(half_length > 0)) throw std::domain_error("half length must be positive");
  DensityProfile p;
  p.family_ = DensityFamily::expression;
  p.L_ = half_length;
  p.eval_ = std::move(fn);
  p.label_ = label;
  p.params_ = std::move(params);
  p.validate_positive(kPositivitySamples);
  p.moments_ =
      std::make_shared<DensityMoments>(moments_by_quadrature(p.eval_, p.L_));
  return p;
}

DensityProfile DensityProfile::tabulated(std::vector<double> x,
                                         std::vector<double> rho) {
  if (x.size() != rho.size() || x.size() < 4)
    throw std::invalid_argument("tabulated density needs >= 4 matching samples");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw std::invalid_argument("tabulated abscissae must increase");
  if (std::abs(x.front() + x.back()) > 1e-9)
    throw std::invalid_argument("tabulated domain must be symmetric about 0");
  for (double v : rho)
    if (!(v > 0)) throw std::domain_error("tabulated density must be positive");
  const double L = x.back();
  auto interp = std::make_shared<MonotoneCubic>(std::move(x), std::move(rho));
  DensityProfile p;
  p.family_ = DensityFamily::tabulated;
  p.L_ = L;
  p.label_ = "tabulated";
  p.eval_ = [interp](double xx) { return (*interp)(xx); };
  p.validate_positive(kPositivitySamples);
  p.moments_ =
      std::make_shared<DensityMoments>(moments_by_quadrature(p.eval_, p.L_));
  return p;
}

double DensityProfile::operator()(double x) const {
  if (x < -L_ - 1e-12 || x > L_ + 1e-12)
    throw std::domain_error("density evaluated outside [-L, L]");
  return eval_(std::clamp(x, -L_, L_));
}

double DensityProfile::sqrt_at(double x) const { return std::sqrt((*this)(x)); }

double DensityProfile::parameter(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end())
    throw std::out_of_range("density has no parameter '" + name + "'");
  return it->second;
}

bool DensityProfile::has_parameter(const std::string& name) const {
  return params_.count(name) != 0;
}

const DensityMoments& DensityProfile::moments() const { return *moments_; }

double DensityProfile::sigma(double x) const {
  return (*this)(x) / moments_->rho0 - 1.0;
}

SampledDensity sample_density(const DensityProfile& rho, const GridPtr& grid) {
  SampledDensity s;
  s.grid = grid;
  s.values.reserve(grid->size());
  s.sqrt_values.reserve(grid->size());
  for (double x : grid->points()) {
    const double v = rho(x);
    s.values.push_back(v);
    s.sqrt_values.push_back(std::sqrt(v));
  }
  return s;
}

DensityProfile gottlieb_transform(const DensityProfile& source, double alpha) {
  if (!(alpha > -1.0))
    throw std::domain_error("isospectral transform requires alpha > -1");
  if (std::abs(source.half_length() - 0.5) > 1e-12)
    throw std::domain_error(
        "isospectral transform is defined for unit-length strings (L = 1/2)");
  const double a = alpha;
  auto src = source;  // value copy keeps the closure self-contained
  auto fn = [src, a](double x) {
    const double u = x + 0.5;
    const double den = 1.0 + a * u;
    const double y = u * (1.0 + a) / den - 0.5;
    const double dy = (1.0 + a) / (den * den);
    return dy * dy * src(std::clamp(y, -0.5, 0.5));
  };
  std::ostringstream os;
  os << "gottlieb(" << source.label() << ",alpha=" << a << ")";
  return DensityProfile::expression(fn, os.str(), 0.5, {{"alpha", a}});
}

namespace {

std::map<std::string, double> parse_kv(const std::string& s) {
  std::map<std::string, double> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value in density spec: " + item);
    const std::string key = item.substr(0, eq);
    std::size_t used = 0;
    const double val = std::stod(item.substr(eq + 1), &used);
    if (used != item.size() - eq - 1)
      throw std::invalid_argument("malformed number in density spec: " + item);
    kv[key] = val;
  }
  return kv;
}

}  // namespace

DensityProfile parse_density_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string tail = (colon == std::string::npos) ? "" : spec.substr(colon + 1);

  if (head == "constant") {
    if (tail.empty()) return DensityProfile::constant();
    auto kv = parse_kv(tail);
    return DensityProfile::constant(kv.count("value") ? kv.at("value") : 1.0);
  }
  if (head == "borg") return DensityProfile::borg(parse_kv(tail).at("alpha"));
  if (head == "parabolic")
    return DensityProfile::parabolic(parse_kv(tail).at("alpha"));
  if (head == "linear") return DensityProfile::linear(parse_kv(tail).at("alpha"));
  if (head == "expr") {
    if (tail.empty()) throw std::invalid_argument("empty expression in density spec");
    return DensityProfile::expression(tail);
  }
  if (head == "file") {
    std::ifstream in(tail);
    if (!in) throw std::invalid_argument("cannot open density file: " + tail);
    std::vector<double> xs, rs;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double x, r;
      if (ls >> x >> r) {
        xs.push_back(x);
        rs.push_back(r);
      }
    }
    return DensityProfile::tabulated(std::move(xs), std::move(rs));
  }
  throw std::invalid_argument("unknown density family: " + head);
}

}  // namespace stringspectra
