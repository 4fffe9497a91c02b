#include "stringspectra/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "stringspectra/collocation.hpp"
#include "stringspectra/density.hpp"
#include "stringspectra/iterate.hpp"
#include "stringspectra/perturbation.hpp"
#include "stringspectra/version.hpp"
#include "stringspectra/wkb.hpp"

namespace stringspectra {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int effective_iterations(const RunConfig& cfg, int fallback) {
  return cfg.iterations_explicit ? cfg.iterations : fallback;
}

GridPtr quadrature_grid(const DensityProfile& density, const RunConfig& cfg) {
  const double l = density.half_length();
  return Grid::uniform(-l, l, static_cast<std::size_t>(cfg.quad_n));
}

SampledFunction unit_start(const GridPtr& grid) {
  return SampledFunction::from(grid, [](double) { return 1.0; });
}

double exact_energy(const DensityProfile& density, int n) {
  const double l = density.half_length();
  switch (density.family()) {
    case DensityFamily::constant: {
      const double value = density.parameter("value");
      return n * kPi * n * kPi / (4.0 * l * l * value);
    }
    case DensityFamily::borg:
      return n * kPi * n * kPi;
    default:
      throw std::invalid_argument(
          "exact energies exist only for constant and borg densities");
  }
}

/// Closed-form modes for the two exactly solvable families, rho-normalized.
double exact_mode(const DensityProfile& density, int n, double x) {
  const double l = density.half_length();
  switch (density.family()) {
    case DensityFamily::constant: {
      const double value = density.parameter("value");
      return std::sin(n * kPi * (x + l) / (2.0 * l)) /
             std::sqrt(l * value);
    }
    case DensityFamily::borg: {
      const double a = density.parameter("alpha");
      const double stretch = 2.0 * a * x + a + 2.0;
      return stretch / std::sqrt(2.0 * (a + 1.0)) *
             std::sin(kPi * (a + 1.0) * n * (2.0 * x + 1.0) / stretch);
    }
    default:
      throw std::invalid_argument(
          "exact modes exist only for constant and borg densities");
  }
}

std::vector<double> compute_energies(const std::string& method,
                                     const DensityProfile& density,
                                     const RunConfig& cfg,
                                     std::vector<std::string>& warnings) {
  const double l = density.half_length();
  if (method == "collocate")
    return solve_spectrum(density, cfg.grid_n, cfg.n_modes).energies;
  if (method == "iterate") {
    const GridPtr grid = quadrature_grid(density, cfg);
    const SampledDensity rho = sample_density(density, grid);
    const IterationResult res = theorem1_solve(
        unit_start(grid), rho, cfg.tol, effective_iterations(cfg, 30));
    if (!res.converged)
      warnings.push_back(
          "iterate: fundamental iteration hit the sweep cap before tolerance");
    return {res.mode.energy};
  }
  if (method == "block") {
    const GridPtr grid = quadrature_grid(density, cfg);
    const SampledDensity rho = sample_density(density, grid);
    const TrialSet trials(gegenbauer_trials(cfg.n_modes, grid), rho);
    std::vector<double> out;
    for (const auto& mode :
         theorem2_block(trials, rho, effective_iterations(cfg, 30)))
      out.push_back(mode.energy);
    return out;
  }
  if (method == "krylov") {
    const GridPtr grid = quadrature_grid(density, cfg);
    const SampledDensity rho = sample_density(density, grid);
    const int depth = effective_iterations(cfg, 4);
    std::vector<double> out;
    for (const auto& mode : krylov_gep(unit_start(grid), rho, depth))
      out.push_back(mode.energy);
    if (static_cast<int>(out.size()) > cfg.n_modes)
      out.resize(static_cast<std::size_t>(cfg.n_modes));
    return out;
  }
  if (method == "shoot") {
    const auto results = shoot_excited(density, effective_iterations(cfg, 20),
                                       300, cfg.tol);
    std::vector<double> out;
    for (const auto& r : results) out.push_back(r.energy);
    if (static_cast<int>(out.size()) < cfg.n_modes)
      warnings.push_back("shoot: located " + std::to_string(out.size()) +
                         " of " + std::to_string(cfg.n_modes) +
                         " requested modes; raise --iterations");
    if (static_cast<int>(out.size()) > cfg.n_modes)
      out.resize(static_cast<std::size_t>(cfg.n_modes));
    return out;
  }
  if (method == "pt") {
    const SigmaMatrix sigma(density, cfg.k_max);
    const PTBasis basis{l, cfg.k_max};
    std::vector<double> out;
    bool warned_tail = false;
    for (int n = 1; n <= cfg.n_modes; ++n) {
      if (n > cfg.k_max / 2) {
        warnings.push_back("pt: modes beyond " + std::to_string(cfg.k_max / 2) +
                           " need a larger --kmax");
        break;
      }
      const PTReport r = pt_energy(n, 3, sigma, basis);
      if (r.tail_warning && !warned_tail) {
        warnings.push_back("pt: truncation tail above 1e-8 relative; raise --kmax");
        warned_tail = true;
      }
      out.push_back(r.partial_sums.back());
    }
    return out;
  }
  if (method == "wkb") {
    std::vector<double> out;
    for (int n = 1; n <= cfg.n_modes; ++n)
      out.push_back(wkb_energy(n, density));
    return out;
  }
  if (method == "exact") {
    std::vector<double> out;
    for (int n = 1; n <= cfg.n_modes; ++n)
      out.push_back(exact_energy(density, n));
    return out;
  }
  throw std::invalid_argument("unknown method: " + method);
}

void fill_spectrum_tables(SpectrumReport& report, const DensityProfile& density,
                          const RunConfig& cfg) {
  report.mode_numbers.resize(static_cast<std::size_t>(cfg.n_modes));
  for (int i = 0; i < cfg.n_modes; ++i)
    report.mode_numbers[static_cast<std::size_t>(i)] = i + 1;
  for (const auto& method : report.methods) {
    std::vector<double> column =
        compute_energies(method, density, cfg, report.warnings);
    column.resize(static_cast<std::size_t>(cfg.n_modes), kNaN);
    report.energies.push_back(std::move(column));
  }
  for (std::size_t m = 1; m < report.energies.size(); ++m) {
    std::vector<double> dev(static_cast<std::size_t>(cfg.n_modes), kNaN);
    for (std::size_t i = 0; i < dev.size(); ++i) {
      const double ref = report.energies[0][i];
      const double val = report.energies[m][i];
      if (std::isfinite(ref) && std::isfinite(val) && ref != 0.0)
        dev[i] = val / ref - 1.0;
    }
    report.deviations.push_back(std::move(dev));
  }
}

void run_modes_command(SpectrumReport& report, const DensityProfile& density,
                       const RunConfig& cfg) {
  if (cfg.methods.empty())
    throw std::invalid_argument("modes command needs a --method");
  const std::string& method = cfg.methods.front();
  report.methods = {method};
  if (cfg.mode_indices.empty())
    throw std::invalid_argument("modes command needs at least one mode index");
  const int max_index =
      *std::max_element(cfg.mode_indices.begin(), cfg.mode_indices.end());
  const int min_index =
      *std::min_element(cfg.mode_indices.begin(), cfg.mode_indices.end());
  if (min_index < 1) throw std::out_of_range("mode indices are 1-based");
  const double l = density.half_length();
  report.positions.resize(static_cast<std::size_t>(cfg.x_resolution));
  for (int i = 0; i < cfg.x_resolution; ++i)
    report.positions[static_cast<std::size_t>(i)] =
        -l + 2.0 * l * i / (cfg.x_resolution - 1);

  auto sample_all = [&](const std::function<double(int, double)>& eval) {
    for (int n : cfg.mode_indices) {
      std::vector<double> row;
      row.reserve(report.positions.size());
      for (double x : report.positions) row.push_back(eval(n, x));
      report.profiles.push_back(std::move(row));
    }
  };

  if (method == "collocate") {
    const CollocationSpectrum spectrum =
        solve_spectrum(density, cfg.grid_n, max_index);
    sample_all([&](int n, double x) { return interpolate_mode(spectrum, n, x); });
  } else if (method == "iterate") {
    if (max_index != 1)
      throw std::out_of_range(
          "the iterate method produces the fundamental mode only");
    const GridPtr grid = quadrature_grid(density, cfg);
    const SampledDensity rho = sample_density(density, grid);
    const IterationResult res = theorem1_solve(
        unit_start(grid), rho, cfg.tol, effective_iterations(cfg, 30));
    if (!res.converged)
      report.warnings.push_back(
          "iterate: fundamental iteration hit the sweep cap before tolerance");
    sample_all([&](int, double x) {
      return interpolate_value(res.mode.mode, x);
    });
  } else if (method == "block") {
    const GridPtr grid = quadrature_grid(density, cfg);
    const SampledDensity rho = sample_density(density, grid);
    const TrialSet trials(gegenbauer_trials(max_index, grid), rho);
    const auto modes =
        theorem2_block(trials, rho, effective_iterations(cfg, 30));
    sample_all([&](int n, double x) {
      return interpolate_value(modes[static_cast<std::size_t>(n - 1)].mode, x);
    });
  } else if (method == "shoot") {
    const auto results = shoot_excited(density, effective_iterations(cfg, 20),
                                       300, cfg.tol);
    if (static_cast<int>(results.size()) < max_index)
      throw std::out_of_range("shoot located only " +
                              std::to_string(results.size()) + " modes");
    sample_all([&](int n, double x) {
      return interpolate_value(results[static_cast<std::size_t>(n - 1)].mode, x);
    });
  } else if (method == "wkb") {
    const WkbSolver solver(density);
    sample_all([&](int n, double x) { return solver.wavefunction(n, x); });
  } else if (method == "pt") {
    const SigmaMatrix sigma(density, cfg.k_max);
    const PTBasis basis{l, cfg.k_max};
    sample_all([&](int n, double x) {
      return pt_wavefunction_first_order(n, sigma, basis, x);
    });
  } else if (method == "exact") {
    sample_all([&](int n, double x) { return exact_mode(density, n, x); });
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }

  if (cfg.overlaps) {
    if (density.family() != DensityFamily::borg)
      throw std::invalid_argument(
          "the overlap table is defined against exact borg modes only");
    const GridPtr grid = quadrature_grid(density, cfg);
    const SampledDensity rho = sample_density(density, grid);
    SampledFunction reference = SampledFunction::from(grid, [&](double x) {
      return density.sqrt_at(x) * exact_mode(density, 1, x);
    });
    normalize_l2(reference);
    SampledFunction xi = unit_start(grid);
    normalize_l2(xi);
    report.overlaps.push_back(inner_product(xi, reference));
    const int sweeps = effective_iterations(cfg, 5);
    for (int j = 0; j < sweeps; ++j) {
      xi = theorem1_step(xi, rho);
      report.overlaps.push_back(inner_product(xi, reference));
    }
  }
}

void run_isospectral_command(SpectrumReport& report,
                             const DensityProfile& density,
                             const RunConfig& cfg) {
  const DensityProfile transformed = gottlieb_transform(density, cfg.alpha);
  report.methods = {"source", "transformed"};
  report.mode_numbers.resize(static_cast<std::size_t>(cfg.n_modes));
  for (int i = 0; i < cfg.n_modes; ++i)
    report.mode_numbers[static_cast<std::size_t>(i)] = i + 1;
  report.energies.push_back(
      solve_spectrum(density, cfg.grid_n, cfg.n_modes).energies);
  report.energies.push_back(
      solve_spectrum(transformed, cfg.grid_n, cfg.n_modes).energies);
  std::vector<double> dev(static_cast<std::size_t>(cfg.n_modes));
  for (std::size_t i = 0; i < dev.size(); ++i)
    dev[i] = report.energies[1][i] / report.energies[0][i] - 1.0;
  report.deviations.push_back(std::move(dev));
}

std::string format_energy(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

nlohmann::json double_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json array_of(const std::vector<double>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (double x : v) arr.push_back(double_or_null(x));
  return arr;
}

std::vector<double> array_from(const nlohmann::json& arr) {
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.push_back(v.is_null() ? kNaN : v.get<double>());
  return out;
}

}  // namespace

SpectrumReport run_command(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.n_modes < 1)
    throw std::invalid_argument("at least one mode must be requested");
  SpectrumReport report;
  report.command = config.command;
  report.config = config;
  const DensityProfile density = parse_density_spec(config.density_spec);

  if (config.command == "spectrum") {
    if (config.methods.size() != 1)
      throw std::invalid_argument("spectrum takes exactly one --method");
    report.methods = config.methods;
    fill_spectrum_tables(report, density, config);
  } else if (config.command == "compare") {
    if (config.methods.size() < 2)
      throw std::invalid_argument("compare needs at least two --methods");
    report.methods = config.methods;
    fill_spectrum_tables(report, density, config);
  } else if (config.command == "modes") {
    run_modes_command(report, density, config);
  } else if (config.command == "isospectral") {
    run_isospectral_command(report, density, config);
  } else {
    throw std::invalid_argument("unknown command: " + config.command);
  }

  report.exit_code = report.warnings.empty() ? 0 : 2;
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::string report_to_json(const SpectrumReport& report) {
  nlohmann::json j;
  j["tool"] = "string-spectra";
  j["version"] = version;
  j["command"] = report.command;
  nlohmann::json cfg;
  cfg["command"] = report.config.command;
  cfg["density"] = report.config.density_spec;
  cfg["methods"] = report.config.methods;
  cfg["grid_n"] = report.config.grid_n;
  cfg["quad_n"] = report.config.quad_n;
  cfg["n_modes"] = report.config.n_modes;
  cfg["iterations"] = report.config.iterations;
  cfg["iterations_explicit"] = report.config.iterations_explicit;
  cfg["k_max"] = report.config.k_max;
  cfg["tol"] = report.config.tol;
  cfg["alpha"] = report.config.alpha;
  cfg["mode_indices"] = report.config.mode_indices;
  cfg["x_resolution"] = report.config.x_resolution;
  cfg["overlaps"] = report.config.overlaps;
  cfg["format"] = report.config.format;
  cfg["out_path"] = report.config.out_path;
  j["config"] = std::move(cfg);
  j["methods"] = report.methods;
  j["mode_numbers"] = report.mode_numbers;
  nlohmann::json energies = nlohmann::json::array();
  for (const auto& col : report.energies) energies.push_back(array_of(col));
  j["energies"] = std::move(energies);
  nlohmann::json deviations = nlohmann::json::array();
  for (const auto& col : report.deviations) deviations.push_back(array_of(col));
  j["deviations"] = std::move(deviations);
  j["warnings"] = report.warnings;
  j["elapsed_seconds"] = report.elapsed_seconds;
  j["exit_code"] = report.exit_code;
  j["positions"] = array_of(report.positions);
  nlohmann::json profiles = nlohmann::json::array();
  for (const auto& row : report.profiles) profiles.push_back(array_of(row));
  j["profiles"] = std::move(profiles);
  j["overlaps"] = array_of(report.overlaps);
  return j.dump(2);
}

SpectrumReport report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SpectrumReport report;
  report.command = j.at("command").get<std::string>();
  const auto& cfg = j.at("config");
  report.config.command = cfg.at("command").get<std::string>();
  report.config.density_spec = cfg.at("density").get<std::string>();
  report.config.methods = cfg.at("methods").get<std::vector<std::string>>();
  report.config.grid_n = cfg.at("grid_n").get<int>();
  report.config.quad_n = cfg.at("quad_n").get<int>();
  report.config.n_modes = cfg.at("n_modes").get<int>();
  report.config.iterations = cfg.at("iterations").get<int>();
  report.config.iterations_explicit = cfg.at("iterations_explicit").get<bool>();
  report.config.k_max = cfg.at("k_max").get<int>();
  report.config.tol = cfg.at("tol").get<double>();
  report.config.alpha = cfg.at("alpha").get<double>();
  report.config.mode_indices = cfg.at("mode_indices").get<std::vector<int>>();
  report.config.x_resolution = cfg.at("x_resolution").get<int>();
  report.config.overlaps = cfg.at("overlaps").get<bool>();
  report.config.format = cfg.at("format").get<std::string>();
  report.config.out_path = cfg.at("out_path").get<std::string>();
  report.methods = j.at("methods").get<std::vector<std::string>>();
  report.mode_numbers = j.at("mode_numbers").get<std::vector<int>>();
  for (const auto& col : j.at("energies")) report.energies.push_back(array_from(col));
  for (const auto& col : j.at("deviations"))
    report.deviations.push_back(array_from(col));
  report.warnings = j.at("warnings").get<std::vector<std::string>>();
  report.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  report.exit_code = j.at("exit_code").get<int>();
  report.positions = array_from(j.at("positions"));
  for (const auto& row : j.at("profiles")) report.profiles.push_back(array_from(row));
  report.overlaps = array_from(j.at("overlaps"));
  return report;
}

std::string report_to_csv(const SpectrumReport& report) {
  std::string out = "# string-spectra ";
  out += version;
  out += ' ';
  out += report.command;
  out += '\n';
  if (report.command == "modes") {
    out += "x";
    for (int n : report.config.mode_indices)
      out += ",psi_" + std::to_string(n);
    out += '\n';
    for (std::size_t i = 0; i < report.positions.size(); ++i) {
      out += format_energy(report.positions[i]);
      for (const auto& row : report.profiles) out += ',' + format_energy(row[i]);
      out += '\n';
    }
    if (!report.overlaps.empty()) {
      out += "# overlaps\nj,overlap\n";
      for (std::size_t jdx = 0; jdx < report.overlaps.size(); ++jdx)
        out += std::to_string(jdx) + ',' + format_energy(report.overlaps[jdx]) +
               '\n';
    }
    return out;
  }
  out += "n";
  for (const auto& m : report.methods) out += ",energy:" + m;
  for (std::size_t m = 1; m < report.methods.size(); ++m)
    out += ",deviation:" + report.methods[m];
  out += '\n';
  for (std::size_t i = 0; i < report.mode_numbers.size(); ++i) {
    out += std::to_string(report.mode_numbers[i]);
    for (const auto& col : report.energies) out += ',' + format_energy(col[i]);
    for (const auto& col : report.deviations) out += ',' + format_energy(col[i]);
    out += '\n';
  }
  return out;
}

std::string write_report(const SpectrumReport& report) {
  const std::string text = (report.config.format == "csv")
                               ? report_to_csv(report)
                               : report_to_json(report);
  if (!report.config.out_path.empty()) {
    std::ofstream file(report.config.out_path);
    if (!file)
      throw std::runtime_error("cannot open output file: " +
                               report.config.out_path);
    file << text;
  }
  return text;
}

}  // namespace stringspectra
