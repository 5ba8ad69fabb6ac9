#include "polx/error.hpp"
#include "polx/pulse.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace polx;

TEST_CASE("boundary profile ramps from 0 to 1") {
    const BoundaryProfile b{0.1};
    CHECK(b.sigma3(0.0) == doctest::Approx(0.0));
    CHECK(b.sigma3(0.05) == doctest::Approx(0.5));
    CHECK(b.sigma3(0.2) == 1.0);
    CHECK(b.state(0.2).tau3 == -1.0);
}

TEST_CASE("without coupling the inflow is advected unchanged") {
    PulseGrid g = PulseGrid::make(1.0, 201);
    const BoundaryProfile b{0.1};
    const PulseParams p{0.5, 1.0, 1.0, 0.0};
    for (int i = 0; i < 120; ++i) pulse_step(g, p, b);
    for (int k = 0; k < g.nz; ++k) {
        const double retarded = g.t - g.z(k);
        CHECK(g.fields[k].sigma3 == doctest::Approx(retarded > 0 ? b.sigma3(retarded) : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("at cos(theta) = 1 the opposite-helicity inflow does not evolve") {
    PulseGrid g = PulseGrid::make(0.5, 101);
    const BoundaryProfile b{0.05};
    for (int i = 0; i < 150; ++i) pulse_step(g, PulseParams{0.0}, b);
    for (int k = 0; k < g.nz; ++k) {
        CHECK(g.fields[k].sigma3 == doctest::Approx(b.sigma3(std::max(g.t - g.z(k), 0.0))).epsilon(1e-13));
        CHECK(g.fields[k].tau3 == -g.fields[k].sigma3);
    }
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(PulseGrid::make(1.0, 10), ConfigError);
    CHECK_THROWS_AS(PulseGrid::make(1.0, 100, 1.5), ConfigError);
    PulseGrid g = PulseGrid::make(1.0, 100);
    g.dt = 2 * g.dz;
    CHECK_THROWS_AS(pulse_step(g, PulseParams{}, BoundaryProfile{}), ConfigError);
}

TEST_CASE("a tilted pulse becomes stationary behind the front") {
    const SteadyResult r = run_to_steady(PulseGrid::make(0.5, 257), PulseParams{std::acos(0.99)}, BoundaryProfile{}, 1.0, 0.05);
    CHECK(r.steady_since < 0.7);
    CHECK(standing_residual(r.snapshots, 0.7) < 1e-10);
    const std::vector<double> s3 = r.steady.sigma3();
    CHECK(s3.back() < 1.0);
    CHECK(s3.back() > 0.99);
    std::stringstream ss;
    write_snapshot_csv(ss, r.steady);
    std::string header;
    std::getline(ss, header);
    CHECK(header.rfind("z,", 0) == 0);
}
