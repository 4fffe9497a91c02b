// Command-line driver: computes fixed-end string spectra and mode profiles
// by any of the implemented methods and writes JSON/CSV reports.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stringspectra/report.hpp"
#include "stringspectra/version.hpp"

namespace {

const std::vector<std::string> kMethods = {"collocate", "iterate", "block",
                                           "krylov",    "shoot",   "pt",
                                           "wkb",       "exact"};

struct CommandOptions {
  CLI::App* app = nullptr;
  CLI::Option* iterations = nullptr;
};

CommandOptions add_command(CLI::App& app, stringspectra::RunConfig& cfg,
                           const std::string& name,
                           const std::string& description) {
  CommandOptions out;
  CLI::App* cmd = app.add_subcommand(name, description);
  cmd->add_option("--density", cfg.density_spec,
                  "density spec: constant[:value=v] | borg:alpha=a | "
                  "parabolic:alpha=a | linear:alpha=a | expr:<formula> | "
                  "file:<path>")
      ->required();
  cmd->add_option("--grid-n", cfg.grid_n, "collocation grid size N")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--quad-n", cfg.quad_n, "iteration quadrature points")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--modes", cfg.n_modes, "number of modes")
      ->check(CLI::PositiveNumber);
  out.iterations = cmd->add_option(
      "--iterations", cfg.iterations,
      "iteration sweeps (iterate/block/shoot) or pencil depth (krylov)");
  cmd->add_option("--kmax", cfg.k_max, "basis size for the pt method")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", cfg.tol, "iteration stopping tolerance");
  cmd->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", cfg.out_path, "output path (default stdout)");
  out.app = cmd;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"string-spectra: eigenvalues and modes of a fixed-end string "
               "with arbitrary positive density"};
  app.set_version_flag("--version", std::string("string-spectra ") +
                                        stringspectra::version);
  app.require_subcommand(1);

  stringspectra::RunConfig cfg;
  cfg.methods.clear();
  std::string method;
  std::vector<std::string> methods;

  CommandOptions spectrum = add_command(
      app, cfg, "spectrum", "compute the spectrum with one method");
  spectrum.app->add_option("--method", method, "solver method")
      ->check(CLI::IsMember(kMethods))
      ->required();

  CommandOptions compare = add_command(
      app, cfg, "compare", "tabulate several methods against the first");
  compare.app
      ->add_option("--methods", methods, "comma-separated solver methods")
      ->delimiter(',')
      ->check(CLI::IsMember(kMethods))
      ->required();

  CommandOptions modes = add_command(
      app, cfg, "modes", "sample mode profiles psi_n(x) on a uniform grid");
  modes.app->add_option("--method", method, "solver method")
      ->check(CLI::IsMember(kMethods))
      ->required();
  modes.app
      ->add_option("--mode-indices", cfg.mode_indices,
                   "comma-separated 1-based mode numbers")
      ->delimiter(',');
  modes.app->add_option("--x-resolution", cfg.x_resolution,
                        "number of sample positions")
      ->check(CLI::Range(2, 1000000));
  modes.app->add_flag("--overlaps", cfg.overlaps,
                      "append the iterate-overlap table against the exact "
                      "fundamental (borg densities only)");

  CommandOptions isospectral = add_command(
      app, cfg, "isospectral",
      "compare collocation spectra of a density and its transform");
  isospectral.app
      ->add_option("--alpha", cfg.alpha, "transform parameter (> -1)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Map every parse failure to the documented error code 1;
    // --help/--version exit 0 through the same path.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  for (const CommandOptions* c :
       {&spectrum, &compare, &modes, &isospectral}) {
    if (c->app->parsed()) {
      cfg.command = c->app->get_name();
      cfg.iterations_explicit = c->iterations->count() > 0;
    }
  }
  if (!method.empty()) cfg.methods = {method};
  if (!methods.empty()) cfg.methods = methods;

  try {
    const stringspectra::SpectrumReport report =
        stringspectra::run_command(cfg);
    const std::string text = stringspectra::write_report(report);
    if (report.config.out_path.empty()) std::cout << text << '\n';
    for (const auto& warning : report.warnings)
      std::cerr << "warning: " << warning << '\n';
    return report.exit_code;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}
