#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stringspectra/report.hpp"
#include "stringspectra/version.hpp"
#include "test_support.hpp"

using namespace stringspectra;
using testsupport::kPi;
using testsupport::kQuarticAlpha10Overlaps;
using testsupport::quartic_decay_mode;
using testsupport::rel_err;

namespace {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// runs the installed driver binary with shell redirection into temp files
ProcessResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string tag = "cli_capture_" + std::to_string(counter++);
    const std::string out_path = tag + ".out", err_path = tag + ".err";
    const std::string cmd = std::string("\"") + STRING_SPECTRA_CLI_PATH + "\" " +
                            args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    ProcessResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spectrum command: dense solver on a flat density") {
    RunConfig cfg;
    cfg.command = "spectrum";
    cfg.density_spec = "constant";
    cfg.methods = {"collocate"};
    cfg.grid_n = 256;
    cfg.n_modes = 5;
    const SpectrumReport r = run_command(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.warnings.empty());
    REQUIRE(r.methods == std::vector<std::string>{"collocate"});
    REQUIRE(r.energies.size() == 1);
    REQUIRE(r.energies[0].size() == 5);
    for (int n = 1; n <= 5; ++n) {
        CHECK(r.mode_numbers[static_cast<std::size_t>(n - 1)] == n);
        CHECK(rel_err(r.energies[0][static_cast<std::size_t>(n - 1)],
                      n * n * kPi * kPi) < 1e-10);
    }
    CHECK(r.deviations.empty());
    CHECK(r.elapsed_seconds >= 0.0);
}

TEST_CASE("compare command: deviation table against the first method") {
    SUBCASE("two exact routes agree to rounding") {
        RunConfig cfg;
        cfg.command = "compare";
        cfg.density_spec = "constant";
        cfg.methods = {"collocate", "wkb"};
        cfg.grid_n = 128;
        cfg.n_modes = 4;
        const SpectrumReport r = run_command(cfg);
        REQUIRE(r.deviations.size() == 1);
        for (double d : r.deviations[0]) CHECK(std::abs(d) < 1e-8);
    }
    SUBCASE("three methods on the squared-linear density") {
        RunConfig cfg;
        cfg.command = "compare";
        cfg.density_spec = "parabolic:alpha=1";
        cfg.methods = {"shoot", "collocate", "wkb"};
        cfg.grid_n = 400;
        cfg.n_modes = 5;
        const SpectrumReport r = run_command(cfg);
        CHECK(r.exit_code == 0);
        REQUIRE(r.energies.size() == 3);
        REQUIRE(r.deviations.size() == 2);
        // dense solver confirms the restriction-point shooting energies
        for (double d : r.deviations[0]) CHECK(std::abs(d) < 1e-5);
        // the phase-average estimate overshoots the fundamental by ~7%
        CHECK(r.deviations[1][0] > 0.06);
        CHECK(r.deviations[1][0] < 0.08);
    }
}

TEST_CASE("spectrum command: phase-average energies of a quartic-decay density") {
    RunConfig cfg;
    cfg.command = "spectrum";
    cfg.density_spec = "borg:alpha=2";
    cfg.methods = {"wkb"};
    cfg.n_modes = 3;
    const SpectrumReport r = run_command(cfg);
    for (int n = 1; n <= 3; ++n) {
        CHECK(rel_err(r.energies[0][static_cast<std::size_t>(n - 1)],
                      n * n * kPi * kPi) < 1e-10);
    }
}

TEST_CASE("modes command: sampled profiles") {
    SUBCASE("flat density second mode is the exact sine") {
        RunConfig cfg;
        cfg.command = "modes";
        cfg.density_spec = "constant";
        cfg.methods = {"collocate"};
        cfg.grid_n = 64;
        cfg.mode_indices = {2};
        const SpectrumReport r = run_command(cfg);
        REQUIRE(r.positions.size() == 201);
        REQUIRE(r.profiles.size() == 1);
        CHECK(r.positions.front() == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(r.positions.back() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(std::abs(r.profiles[0].front()) < 1e-12);
        CHECK(std::abs(r.profiles[0].back()) < 1e-12);
        for (std::size_t i = 0; i < r.positions.size(); ++i) {
            const double exact =
                std::sqrt(2.0) * std::sin(2.0 * kPi * (r.positions[i] + 0.5));
            CHECK(std::abs(r.profiles[0][i] - exact) < 1e-10);
        }
    }
    SUBCASE("steep quartic-decay fundamental approaches the closed form") {
        RunConfig cfg;
        cfg.command = "modes";
        cfg.density_spec = "borg:alpha=10";
        cfg.methods = {"collocate"};
        cfg.grid_n = 300;
        cfg.mode_indices = {1};
        const SpectrumReport r = run_command(cfg);
        double worst = 0.0;
        for (std::size_t i = 0; i < r.positions.size(); ++i) {
            worst = std::max(worst,
                             std::abs(r.profiles[0][i] -
                                      quartic_decay_mode(1, 10.0, r.positions[i])));
        }
        CHECK(worst < 1e-3);
    }
    SUBCASE("overlap table reproduces the symmetrized-iteration trace") {
        RunConfig cfg;
        cfg.command = "modes";
        cfg.density_spec = "borg:alpha=10";
        cfg.methods = {"iterate"};
        cfg.quad_n = 40001;
        cfg.mode_indices = {1};
        cfg.overlaps = true;
        const SpectrumReport r = run_command(cfg);
        REQUIRE(r.overlaps.size() == 6);  // flat start plus five sweeps
        for (std::size_t j = 0; j < r.overlaps.size(); ++j) {
            CHECK(std::abs(r.overlaps[j] - kQuarticAlpha10Overlaps[j]) < 1e-6);
        }
        CHECK(r.exit_code == 0);
    }
    SUBCASE("overlaps demand an exactly solvable density") {
        RunConfig cfg;
        cfg.command = "modes";
        cfg.density_spec = "parabolic:alpha=1";
        cfg.methods = {"collocate"};
        cfg.overlaps = true;
        CHECK_THROWS_AS((void)run_command(cfg), std::invalid_argument);
    }
}

TEST_CASE("isospectral command: spectra survive the interval transform") {
    SUBCASE("identity transform") {
        RunConfig cfg;
        cfg.command = "isospectral";
        cfg.density_spec = "parabolic:alpha=0.7";
        cfg.alpha = 0.0;
        cfg.grid_n = 128;
        cfg.n_modes = 4;
        const SpectrumReport r = run_command(cfg);
        REQUIRE(r.methods == std::vector<std::string>({"source", "transformed"}));
        REQUIRE(r.deviations.size() == 1);
        for (double d : r.deviations[0]) CHECK(std::abs(d) < 1e-12);
    }
    SUBCASE("flat density maps onto the quartic-decay family") {
        RunConfig cfg;
        cfg.command = "isospectral";
        cfg.density_spec = "constant";
        cfg.alpha = 10.0;
        cfg.grid_n = 1000;
        cfg.n_modes = 4;
        const SpectrumReport r = run_command(cfg);
        for (double d : r.deviations[0]) CHECK(std::abs(d) < 1e-5);
        // and the source spectrum itself is the flat one
        CHECK(rel_err(r.energies[0][0], kPi * kPi) < 1e-9);
    }
    SUBCASE("squared-linear density, generic parameter") {
        RunConfig cfg;
        cfg.command = "isospectral";
        cfg.density_spec = "parabolic:alpha=0.5";
        cfg.alpha = 0.5;
        cfg.grid_n = 800;
        cfg.n_modes = 4;
        const SpectrumReport r = run_command(cfg);
        for (double d : r.deviations[0]) CHECK(std::abs(d) < 1e-5);
    }
}

TEST_CASE("json serialization round-trips bit-exactly") {
    RunConfig cfg;
    cfg.command = "spectrum";
    cfg.density_spec = "constant";
    cfg.methods = {"iterate"};
    cfg.quad_n = 2001;
    cfg.n_modes = 3;  // the iterate column pads modes 2..3 with null
    const SpectrumReport r = run_command(cfg);
    REQUIRE(r.energies[0].size() == 3);
    CHECK(std::isnan(r.energies[0][1]));
    CHECK(std::isnan(r.energies[0][2]));

    const std::string text = report_to_json(r);
    CHECK(text.find("null") != std::string::npos);
    const SpectrumReport back = report_from_json(text);
    CHECK(back.command == r.command);
    CHECK(back.config.density_spec == r.config.density_spec);
    CHECK(back.config.quad_n == r.config.quad_n);
    CHECK(back.config.tol == r.config.tol);
    CHECK(back.methods == r.methods);
    CHECK(back.mode_numbers == r.mode_numbers);
    CHECK(back.energies[0][0] == r.energies[0][0]);  // bitwise round trip
    CHECK(std::isnan(back.energies[0][1]));
    CHECK(std::isnan(back.energies[0][2]));
    CHECK(back.elapsed_seconds == r.elapsed_seconds);
    CHECK(back.exit_code == r.exit_code);
}

TEST_CASE("csv serialization carries the version stamp and digit budget") {
    SUBCASE("spectrum table") {
        RunConfig cfg;
        cfg.command = "compare";
        cfg.density_spec = "constant";
        cfg.methods = {"collocate", "exact"};
        cfg.grid_n = 64;
        cfg.n_modes = 2;
        const SpectrumReport r = run_command(cfg);
        const std::string csv = report_to_csv(r);
        const std::string stamp =
            std::string("# string-spectra ") + version + " compare\n";
        CHECK(csv.rfind(stamp, 0) == 0);
        CHECK(csv.find("n,energy:collocate,energy:exact,deviation:exact\n") !=
              std::string::npos);
        CHECK(csv.find("9.869604401") != std::string::npos);  // 10 digits
        CHECK(csv.find("39.4784176") != std::string::npos);   // %g trims the trailing zero
    }
    SUBCASE("modes table with the overlap block") {
        RunConfig cfg;
        cfg.command = "modes";
        cfg.density_spec = "borg:alpha=10";
        cfg.methods = {"iterate"};
        cfg.quad_n = 4001;
        cfg.mode_indices = {1};
        cfg.x_resolution = 11;
        cfg.overlaps = true;
        const SpectrumReport r = run_command(cfg);
        const std::string csv = report_to_csv(r);
        CHECK(csv.rfind("# string-spectra", 0) == 0);
        CHECK(csv.find("x,psi_1\n") != std::string::npos);
        CHECK(csv.find("# overlaps\nj,overlap\n0,") != std::string::npos);
    }
}

TEST_CASE("driver binary: exit codes and streams") {
    SUBCASE("clean run prints a parseable json report") {
        const ProcessResult p = run_cli(
            "spectrum --density constant --method collocate --grid-n 64 "
            "--modes 2");
        CHECK(p.exit_code == 0);
        CHECK(p.err.empty());
        const SpectrumReport r = report_from_json(p.out);
        CHECK(rel_err(r.energies[0][0], kPi * kPi) < 1e-10);
    }
    SUBCASE("unparseable density maps to exit 1 with an error line") {
        const ProcessResult p = run_cli(
            "spectrum --density borg --method collocate");
        CHECK(p.exit_code == 1);
        CHECK(p.err.find("error") != std::string::npos);
    }
    SUBCASE("solver warnings map to exit 2") {
        const ProcessResult p = run_cli(
            "spectrum --density 'parabolic:alpha=1' --method pt --kmax 8 "
            "--modes 10");
        CHECK(p.exit_code == 2);
        CHECK(p.err.find("warning") != std::string::npos);
        CHECK(p.err.find("kmax") != std::string::npos);
    }
    SUBCASE("version flag") {
        const ProcessResult p = run_cli("--version");
        CHECK(p.exit_code == 0);
        CHECK(p.out.find(std::string("string-spectra ") + version) !=
              std::string::npos);
    }
    SUBCASE("missing subcommand is a usage error") {
        const ProcessResult p = run_cli("");
        CHECK(p.exit_code == 1);
    }
    SUBCASE("--out writes the report to a file") {
        const std::string path = "cli_out_report.csv";
        const ProcessResult p = run_cli(
            "spectrum --density constant --method wkb --modes 2 --format csv "
            "--out " + path);
        CHECK(p.exit_code == 0);
        const std::string written = slurp(path);
        CHECK(written.rfind("# string-spectra", 0) == 0);
        CHECK(written.find("energy:wkb") != std::string::npos);
        std::remove(path.c_str());
    }
}

}  // TEST_SUITE
