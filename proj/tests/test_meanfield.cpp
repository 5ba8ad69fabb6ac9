#include "generators.hpp"

#include "polx/error.hpp"
#include "polx/meanfield.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace polx;
using polx::testing::uniform;

namespace {

MeanFieldState random_pure() {
    auto half = [](double& s3, std::complex<double>& sp) {
        s3 = uniform(-1.0, 1.0);
        sp = 0.5 * std::sqrt(1.0 - s3 * s3) * std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi));
    };
    MeanFieldState s;
    half(s.sigma3, s.sigma_plus);
    half(s.tau3, s.tau_plus);
    return s;
}

MeanFieldState axpy(const MeanFieldState& s, double h, const MeanFieldState& d) {
    auto a = s.to_array();
    const auto b = d.to_array();
    for (int i = 0; i < 6; ++i) a[i] += h * b[i];
    return MeanFieldState::from_array(a);
}

}  // namespace

TEST_CASE("array packing round trips") {
    const MeanFieldState s = random_pure();
    const MeanFieldState r = MeanFieldState::from_array(s.to_array());
    CHECK(r.sigma_plus == s.sigma_plus);
    CHECK(r.tau3 == s.tau3);
}

TEST_CASE("property: the flow is tangent to the Bloch spheres and the energy surface") {
    for (int trial = 0; trial < 50; ++trial) {
        const MeanFieldState s = random_pure();
        const MfParams p{uniform(0.0, std::numbers::pi), uniform(0.5, 2.0), uniform(0.5, 2.0)};
        const MeanFieldState d = mf_rhs(s, p);
        const double h = 1e-6;
        const MeanFieldState fwd = axpy(s, h, d), bwd = axpy(s, -h, d);
        CHECK(std::abs(bloch_norm_a(fwd) - bloch_norm_a(bwd)) / (2 * h) < 1e-6);
        CHECK(std::abs(bloch_norm_b(fwd) - bloch_norm_b(bwd)) / (2 * h) < 1e-6);
        if (p.n1 == p.n2) CHECK(std::abs(mf_energy(fwd, p) - mf_energy(bwd, p)) / (2 * h) < 1e-6);
    }
}

TEST_CASE("opposite helicity is stationary at theta = 0 and unstable otherwise") {
    const MeanFieldState s = opposite_helicity_state();
    const MeanFieldState d = mf_rhs(s, MfParams{0.0});
    CHECK(std::abs(d.sigma_plus) == 0.0);
    CHECK(d.sigma3 == 0.0);
    CHECK(max_growth_rate(s, MfParams{0.3}) > 0.0);
}

TEST_CASE("first crossing matches the independent DOP853 reference") {
    // tests/oracles/meanfield_reference.py
    const MfSeries s = mf_evolve(opposite_helicity_state(), MfParams{std::acos(1.0 - 1e-3)}, 6.0, 1e-12);
    const CrossingReport r = crossing_report(s);
    CHECK(r.first_crossing_time == doctest::Approx(1.988732992404).epsilon(1e-8));
    const MfSeries q = mf_evolve(opposite_helicity_state(), MfParams{std::acos(1.0 - 1e-1)}, 3.0, 1e-12);
    CHECK(crossing_report(q).first_crossing_time == doctest::Approx(0.914108661).epsilon(1e-8));
}

TEST_CASE("conservation over a long run from a random state") {
    const MeanFieldState init = random_pure();
    const MfParams p{1.1};
    const MfSeries s = mf_evolve(init, p, 50.0, 1e-12);
    const double e0 = mf_energy(init, p);
    for (const MeanFieldState& x : s.state) {
        CHECK(std::abs(bloch_norm_a(x) - 1.0) < 1e-9);
        CHECK(std::abs(mf_energy(x, p) - e0) < 1e-9);
    }
    CHECK(s.t.back() == doctest::Approx(50.0));
}

TEST_CASE("crossings of cos(t)") {
    std::vector<double> t, y;
    for (int i = 0; i <= 1000; ++i) {
        t.push_back(0.01 * i);
        y.push_back(std::cos(t.back()));
    }
    const CrossingReport r = crossing_report(t, y);
    REQUIRE(r.crossings.size() == 3);
    CHECK(r.crossings[0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-5));
    CHECK(r.crossings[1] == doctest::Approx(3 * std::numbers::pi / 2).epsilon(1e-5));
    CHECK(r.period == doctest::Approx(2 * std::numbers::pi).epsilon(1e-5));
    std::vector<double> flat(t.size(), 1.0);
    CHECK_THROWS_AS(crossing_report(t, flat), NumericalError);
}

TEST_CASE("log scaling fit recovers a synthetic law") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1e-1, 1e-3, 1e-5, 1e-7}) pts.emplace_back(x, 0.3 - 0.25 * std::log(x));
    const LogScalingFit f = log_scaling_fit(pts);
    CHECK(f.slope == doctest::Approx(0.25));
    CHECK(f.intercept == doctest::Approx(0.3));
    CHECK(f.residual < 1e-12);
    CHECK(f.mean_spacing == doctest::Approx(0.25 * std::log(100.0)));
    const std::vector<std::pair<double, double>> narrow{{1e-1, 1}, {1e-2, 2}, {5e-2, 3}};
    CHECK_THROWS_AS(log_scaling_fit(narrow), ConfigError);
}

TEST_CASE("mf csv has a header and one row per sample") {
    const MfSeries s = mf_evolve(opposite_helicity_state(), MfParams{0.5}, 1.0, 1e-10, 0.1);
    std::stringstream ss;
    write_mf_csv(ss, s);
    std::string line;
    int rows = 0;
    std::getline(ss, line);
    CHECK(line.rfind("t,sigma3", 0) == 0);
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == static_cast<int>(s.t.size()));
}
