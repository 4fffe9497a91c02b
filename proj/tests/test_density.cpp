#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stringspectra/density.hpp"
#include "stringspectra/grid.hpp"
#include "test_support.hpp"

using namespace stringspectra;
using testsupport::kPi;

TEST_SUITE("density") {

TEST_CASE("closed-form families evaluate to hand-computed values") {
    CHECK(DensityProfile::constant()(0.3) == 1.0);
    CHECK(DensityProfile::constant(2.5)(-0.49) == 2.5);
    // (1+10)^2 / (1 + 10*(0+1/2))^4 = 121/1296
    CHECK(DensityProfile::borg(10.0)(0.0) ==
          doctest::Approx(121.0 / 1296.0).epsilon(1e-15));
    CHECK(DensityProfile::parabolic(1.0)(-0.5) ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK(DensityProfile::linear(0.5)(0.4) ==
          doctest::Approx(1.2).epsilon(1e-15));
    CHECK(DensityProfile::expression("(1+0.5*x)^2")(0.2) ==
          doctest::Approx(1.21).epsilon(1e-14));
}

TEST_CASE("family metadata: parameters, labels, half length") {
    const DensityProfile b = DensityProfile::borg(3.0);
    CHECK(b.family() == DensityFamily::borg);
    CHECK(b.half_length() == 0.5);
    CHECK(b.has_parameter("alpha"));
    CHECK(b.parameter("alpha") == 3.0);
    CHECK_FALSE(b.has_parameter("value"));
    CHECK_THROWS_AS((void)b.parameter("value"), std::out_of_range);
    CHECK(b.label() == "borg:alpha=3");

    CHECK_THROWS_AS((void)b(0.6), std::domain_error);  // outside [-L, L]
}

TEST_CASE("parameter ranges are enforced at construction") {
    CHECK_THROWS_AS((void)DensityProfile::borg(-1.0), std::domain_error);
    CHECK_THROWS_AS((void)DensityProfile::parabolic(2.5), std::domain_error);
    CHECK_THROWS_AS((void)DensityProfile::linear(2.0), std::domain_error);
    CHECK_THROWS_AS((void)DensityProfile::constant(0.0), std::domain_error);
    CHECK_NOTHROW((void)DensityProfile::parabolic(2.0));  // boundary allowed
}

TEST_CASE("an expression that dips below zero is rejected with the location") {
    try {
        (void)DensityProfile::expression("x");
        FAIL("expected a positivity failure");
    } catch (const std::domain_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("not strictly positive") != std::string::npos);
        CHECK(msg.find("x =") != std::string::npos);
    }
    // a positive expression passes the same 4096-sample screen
    CHECK_NOTHROW((void)DensityProfile::expression("0.01+x^2"));
}

TEST_CASE("moments match closed forms") {
    SUBCASE("constant") {
        const DensityMoments& m = DensityProfile::constant(3.0).moments();
        CHECK(m.rho0 == doctest::Approx(3.0).epsilon(1e-13));
        CHECK(m.mean_sqrt == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
        CHECK(std::abs(m.mean_sigma) < 1e-12);
        CHECK(std::abs(m.mean_sigma_sq) < 1e-12);
    }
    SUBCASE("quartic-decay profile has unit sqrt-mean at any parameter") {
        for (double alpha : {0.5, 3.0}) {
            const DensityMoments& m = DensityProfile::borg(alpha).moments();
            CHECK(std::abs(m.mean_sqrt - 1.0) < 1e-10);
        }
    }
    SUBCASE("squared-linear profile") {
        // rho = (1+x)^2: rho0 = 1 + 1/12 = 13/12, <sqrt(rho)> = 1
        const DensityMoments& m = DensityProfile::parabolic(1.0).moments();
        CHECK(std::abs(m.rho0 - 13.0 / 12.0) < 1e-12);
        CHECK(std::abs(m.mean_sqrt - 1.0) < 1e-12);
        // <sigma^2> = <rho^2>/rho0^2 - 1 with
        // <rho^2> = \int (1+x)^4 dx = 1 + 1/2 + 1/80 = 121/80
        const double msq = (121.0 / 80.0) / (169.0 / 144.0) - 1.0;
        CHECK(std::abs(m.mean_sigma_sq - msq) < 1e-12);
    }
}

TEST_CASE("sigma is the relative deviation from the mean density") {
    CHECK(DensityProfile::constant(4.0).sigma(0.2) == doctest::Approx(0.0).epsilon(1e-13));
    const DensityProfile p = DensityProfile::parabolic(1.0);
    // rho(0)/rho0 - 1 = 12/13 - 1 = -1/13;  rho(1/2)/rho0 - 1 = (9/4)(12/13) - 1 = 14/13
    CHECK(p.sigma(0.0) == doctest::Approx(-1.0 / 13.0).epsilon(1e-12));
    CHECK(p.sigma(0.5) == doctest::Approx(14.0 / 13.0).epsilon(1e-12));
    SUBCASE("sigma has zero mean for every family") {
        for (const DensityProfile& rho :
             {DensityProfile::expression("1+0.3*cos(2*x)+0.1*x"),
              DensityProfile::borg(2.0)}) {
            const GridPtr g = Grid::uniform(-0.5, 0.5, 20001);
            double acc = 0.0;
            const auto& x = g->points();
            for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                const double h = x[i + 1] - x[i];
                acc += 0.5 * h * (rho.sigma(x[i]) + rho.sigma(x[i + 1]));
            }
            CHECK(std::abs(acc) < 1e-7);
        }
    }
}

TEST_CASE("reflection x -> -x maps the quartic-decay family onto itself") {
    // rho_alpha(-x) = rho_beta(x) with beta = -alpha/(1+alpha)
    const double alpha = 1.7;
    const double beta = -alpha / (1.0 + alpha);
    const DensityProfile a = DensityProfile::borg(alpha);
    const DensityProfile b = DensityProfile::borg(beta);
    for (double x : {-0.45, -0.2, 0.0, 0.13, 0.37, 0.499}) {
        CHECK(std::abs(a(-x) - b(x)) < 1e-12 * std::abs(b(x)));
    }
}

TEST_CASE("sample_density fills values and square roots consistently") {
    const GridPtr g = Grid::uniform(-0.5, 0.5, 257);
    const DensityProfile rho = DensityProfile::borg(4.0);
    const SampledDensity s = sample_density(rho, g);
    REQUIRE(s.values.size() == g->size());
    REQUIRE(s.sqrt_values.size() == g->size());
    for (std::size_t i = 0; i < g->size(); i += 16) {
        CHECK(s.values[i] == doctest::Approx(rho(g->points()[i])).epsilon(1e-14));
        CHECK(s.sqrt_values[i] ==
              doctest::Approx(std::sqrt(s.values[i])).epsilon(1e-14));
    }
}

TEST_CASE("tabulated interpolation reproduces a smooth profile") {
    const DensityProfile truth = DensityProfile::borg(1.0);
    std::vector<double> xs, rs;
    const GridPtr g = Grid::uniform(-0.5, 0.5, 8001);
    for (double x : g->points()) {
        xs.push_back(x);
        rs.push_back(truth(x));
    }
    const DensityProfile tab = DensityProfile::tabulated(xs, rs);
    CHECK(tab.family() == DensityFamily::tabulated);
    // off-node evaluation: monotone cubic on a 5e-4 mesh of a smooth profile
    for (double x : {-0.47712, -0.20001, 0.000123, 0.33337, 0.49957}) {
        CHECK(std::abs(tab(x) - truth(x)) < 1e-9);
    }
}

TEST_CASE("tabulated input validation") {
    const std::vector<double> x4 = {-0.5, -0.2, 0.2, 0.5};
    CHECK_THROWS_AS(
        (void)DensityProfile::tabulated({-0.5, 0.0, 0.5}, {1.0, 1.0, 1.0}),
        std::invalid_argument);  // too few samples
    CHECK_THROWS_AS((void)DensityProfile::tabulated(x4, {1.0, 1.0, 1.0}),
                    std::invalid_argument);  // length mismatch
    CHECK_THROWS_AS(
        (void)DensityProfile::tabulated({-0.5, 0.2, 0.0, 0.5}, {1, 1, 1, 1}),
        std::invalid_argument);  // not increasing
    CHECK_THROWS_AS(
        (void)DensityProfile::tabulated({-0.5, 0.0, 0.2, 0.4}, {1, 1, 1, 1}),
        std::invalid_argument);  // asymmetric domain
    CHECK_THROWS_AS((void)DensityProfile::tabulated(x4, {1.0, -0.5, 1.0, 1.0}),
                    std::domain_error);  // non-positive value
}

TEST_CASE("isospectral coordinate change") {
    SUBCASE("alpha = 0 is the identity") {
        const DensityProfile src = DensityProfile::parabolic(0.7);
        const DensityProfile out = gottlieb_transform(src, 0.0);
        for (double x : {-0.49, -0.1, 0.0, 0.25, 0.45}) {
            CHECK(std::abs(out(x) - src(x)) < 1e-12);
        }
    }
    SUBCASE("applied to the flat string it generates the quartic-decay family") {
        const DensityProfile out =
            gottlieb_transform(DensityProfile::constant(), 10.0);
        const DensityProfile borg = DensityProfile::borg(10.0);
        for (double x : {-0.499, -0.3, -0.01, 0.2, 0.44}) {
            CHECK(std::abs(out(x) - borg(x)) < 1e-12 * borg(x));
        }
    }
    SUBCASE("the sqrt-mean (total optical length) is preserved") {
        const DensityProfile src = DensityProfile::parabolic(0.5);
        const DensityProfile out = gottlieb_transform(src, 1.0);
        CHECK(std::abs(out.moments().mean_sqrt - src.moments().mean_sqrt) < 1e-9);
    }
    SUBCASE("parameter range") {
        CHECK_THROWS_AS(
            (void)gottlieb_transform(DensityProfile::constant(), -1.0),
            std::domain_error);
    }
}

TEST_CASE("density spec mini-language") {
    CHECK(parse_density_spec("constant")(0.1) == 1.0);
    CHECK(parse_density_spec("constant:value=2")(0.1) == 2.0);
    CHECK(parse_density_spec("borg:alpha=10")(0.0) ==
          doctest::Approx(121.0 / 1296.0).epsilon(1e-14));
    CHECK(parse_density_spec("parabolic:alpha=1").family() == DensityFamily::parabolic);
    CHECK(parse_density_spec("linear:alpha=0.5")(0.4) ==
          doctest::Approx(1.2).epsilon(1e-14));
    CHECK(parse_density_spec("expr:(1+0.5*x)^2")(0.2) ==
          doctest::Approx(1.21).epsilon(1e-14));

    SUBCASE("file form reads two-column CSV") {
        const std::string path = "density_spec_test.csv";
        {
            std::ofstream out(path);
            out << "# x,rho\n";
            const DensityProfile truth = DensityProfile::parabolic(0.5);
            for (int i = 0; i <= 400; ++i) {
                const double x = -0.5 + i / 400.0;
                out.precision(17);
                out << x << "," << truth(x) << "\n";
            }
        }
        const DensityProfile rho = parse_density_spec("file:" + path);
        CHECK(rho.family() == DensityFamily::tabulated);
        CHECK(std::abs(rho(0.123456) - DensityProfile::parabolic(0.5)(0.123456)) < 1e-8);
        std::remove(path.c_str());
    }
    SUBCASE("malformed specs are rejected") {
        CHECK_THROWS_AS((void)parse_density_spec("gaussian:alpha=1"),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)parse_density_spec("expr:"), std::invalid_argument);
        CHECK_THROWS_AS((void)parse_density_spec("file:/no/such/file.csv"),
                        std::invalid_argument);
        CHECK_THROWS((void)parse_density_spec("borg"));  // missing alpha
        CHECK_THROWS((void)parse_density_spec("borg:alpha=oops"));
    }
}

}  // TEST_SUITE
