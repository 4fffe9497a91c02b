#pragma once

#include <string>
#include <vector>

namespace stringspectra {

/// Everything one CLI invocation needs, echoed verbatim into the report so
/// any table regenerates from a single recorded command.
struct RunConfig {
  std::string command = "spectrum";  // spectrum | compare | modes | isospectral
  std::string density_spec = "constant";
  std::vector<std::string> methods = {"collocate"};
  int grid_n = 2000;      // collocation grid size N
  int quad_n = 4001;      // iteration quadrature grid points
  int n_modes = 10;
  int iterations = 30;    // sweeps (iterate/block/shoot) or pencil depth (krylov)
  bool iterations_explicit = false;  // false: per-method defaults apply
  int k_max = 200;        // basis size for the perturbative method
  double tol = 1e-10;
  double alpha = 0.0;     // isospectral transform parameter
  std::vector<int> mode_indices = {1};  // modes command
  int x_resolution = 201;               // modes command
  bool overlaps = false;  // modes command: iterate-overlap table (borg only)
  std::string format = "json";  // json | csv
  std::string out_path;         // empty = stdout
};

/// One report object for every command. Spectrum-like commands fill
/// methods/energies/deviations; the modes command fills positions/profiles
/// (and optionally overlaps). energies[m][i] belongs to methods[m] and
/// mode_numbers[i]; a NaN entry means the method does not produce that mode
/// (it serializes as null). deviations[m-1][i] = E/E_ref - 1 against
/// methods[0], the designated reference.
struct SpectrumReport {
  std::string command;
  RunConfig config;
  std::vector<std::string> methods;
  std::vector<int> mode_numbers;
  std::vector<std::vector<double>> energies;
  std::vector<std::vector<double>> deviations;
  std::vector<std::string> warnings;
  double elapsed_seconds = 0.0;
  int exit_code = 0;

  std::vector<double> positions;
  std::vector<std::vector<double>> profiles;  // parallel to config.mode_indices
  std::vector<double> overlaps;               // iterate overlaps, j = 0..
};

/// Dispatches on config.command, runs the requested solvers, assembles the
/// report. Solver warnings (non-convergence, truncation tails) land in
/// warnings and set exit_code = 2; hard errors propagate as exceptions for
/// the caller to map to exit code 1.
SpectrumReport run_command(const RunConfig& config);

/// Single top-level JSON object; doubles serialize in shortest
/// round-trip form so a re-read reproduces every numeric field bit-exactly
/// (NaN round-trips through null).
std::string report_to_json(const SpectrumReport& report);
SpectrumReport report_from_json(const std::string& text);

/// Comma-separated table with a version-stamped comment line
/// ("# string-spectra <version> <command>") above a fixed per-command header
/// row; energies carry 10 significant digits.
std::string report_to_csv(const SpectrumReport& report);

/// Serializes per config.format and writes to config.out_path (or returns
/// for stdout when the path is empty). Returns the serialized text.
std::string write_report(const SpectrumReport& report);

}  // namespace stringspectra
