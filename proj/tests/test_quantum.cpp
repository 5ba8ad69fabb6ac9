#include "generators.hpp"

#include "polx/coupling.hpp"
#include "polx/error.hpp"
#include "polx/quantum.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace polx;
using polx::testing::random_state;
using polx::testing::uniform_int;

TEST_CASE("single-photon exchange oscillates as cos(8t)") {
    const BeamSize one(1);
    const auto h = build_hamiltonian(Basis::Circular, 0.0, one, one);
    const ObservableSeries s = evolve_observables(QuantumState::product(one, 0.5, one, -0.5), h, EvolutionPlan::uniform(2.0, 0.01));
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        CHECK(s.rows[i].sigma3 == doctest::Approx(std::cos(8.0 * s.t[i])).epsilon(1e-9));
        CHECK(s.rows[i].tau3 == doctest::Approx(-std::cos(8.0 * s.t[i])).epsilon(1e-9));
    }
}

TEST_CASE("product states are unentangled and uncorrelated") {
    const BeamSize n(5);
    const QuantumState s = QuantumState::product(n, 1.5, n, -0.5);
    const Expectations e = expectations(s);
    CHECK(e.sigma3 == doctest::Approx(0.6));
    CHECK(e.tau3 == doctest::Approx(-0.2));
    CHECK(std::abs(e.zeta) < 1e-15);
    CHECK(entanglement_entropy(reduced_density(s, Beam::A)) == doctest::Approx(0.0));
    CHECK(variance_ndiff(s, Beam::A) == doctest::Approx(0.0));
}

TEST_CASE("cat state has log 2 entropy and zeta = -1") {
    const BeamSize n(4);
    const CVec amp = (QuantumState::product(n, 2, n, -2).amplitudes() + QuantumState::product(n, -2, n, 2).amplitudes()) / std::sqrt(2.0);
    const QuantumState cat(n, n, amp);
    CHECK(entanglement_entropy(reduced_density(cat, Beam::A)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(expectations(cat).zeta == doctest::Approx(-1.0));
    CHECK(variance_ndiff(cat, Beam::A) == doctest::Approx(16.0));
}

TEST_CASE("property: reduced densities are unit-trace, Hermitian, with equal entropies") {
    for (int trial = 0; trial < 30; ++trial) {
        const QuantumState s = random_state(uniform_int(1, 7), uniform_int(1, 7));
        const CMat ra = reduced_density(s, Beam::A), rb = reduced_density(s, Beam::B);
        CHECK(std::abs(ra.trace() - 1.0) < 1e-13);
        CHECK((ra - ra.adjoint()).norm() < 1e-14);
        const double sa = entanglement_entropy(ra), sb = entanglement_entropy(rb);
        CHECK(sa == doctest::Approx(sb).epsilon(1e-10));
        CHECK(sa <= std::log(std::min(s.n_a().dim(), s.n_b().dim())) + 1e-12);
        CHECK(std::abs(zeta_rotated(s)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("block evolution equals full-space evolution") {
    const BeamSize n(4);
    const auto h = build_hamiltonian(Basis::Circular, 0.0, n, n);
    const MTotalBlock block = circular_block(n, n, 0.0);
    const QuantumState init = QuantumState::product(n, 2, n, -2);
    CVec b0 = CVec::Zero(block.dim());
    b0[block.find(4, 0)] = 1.0;
    const EvolutionPlan plan = EvolutionPlan::uniform(3.0, 0.05);
    const ObservableSeries full = evolve_observables(init, h, plan), blk = evolve_observables(b0, block, plan);
    REQUIRE(full.t.size() == blk.t.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < full.t.size(); ++i) {
        const Observables &a = full.rows[i], &b = blk.rows[i];
        for (double d : {a.sigma3 - b.sigma3, a.tau3 - b.tau3, a.zeta - b.zeta, a.zeta_rot - b.zeta_rot, a.s_ent - b.s_ent,
                         a.var_ndiff - b.var_ndiff, a.energy - b.energy})
            worst = std::max(worst, std::abs(d));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("Dicke dynamics agree with the brute-force qubit register") {
    for (Basis b : {Basis::Plane, Basis::Circular}) {
        const OracleDeviation d = oracle_compare(2, 3, 0.4, b, 2.0, 0.1);
        CHECK(d.max_observable < 1e-9);
        CHECK(d.max_leakage < 1e-20);
    }
}

TEST_CASE("evolution plan validation") {
    CHECK_THROWS_AS(EvolutionPlan::uniform(1.0, 0.1, 1e-3).validate(), ConfigError);
    CHECK_THROWS_AS(EvolutionPlan::uniform(1.0, -0.1), ConfigError);
    CHECK(EvolutionPlan::uniform(1.0, 0.1).t_grid.size() == 11);
}

TEST_CASE("peaks and crossings of sampled signals") {
    std::vector<double> t, y;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(0.01 * i);
        y.push_back(std::sin(2.0 * t.back()) * std::sin(2.0 * t.back()));
    }
    const auto peaks = find_peaks(t, y, 0.5);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].t == doctest::Approx(std::numbers::pi / 4).epsilon(1e-4));
    CHECK(peaks[0].value == doctest::Approx(1.0).epsilon(1e-4));
    std::vector<double> c;
    for (double x : t) c.push_back(std::cos(x));
    const auto z = quadratic_crossings(t, c);
    REQUIRE(z.size() == 1);
    CHECK(z[0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-6));
    CHECK(first_time_below(t, c, 0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-2));
}

TEST_CASE("opposite-helicity runs: variance starts at zero and the break time grows with N") {
    const ObservableSeries a = opposite_helicity_block_run(16, 3.0, 0.005), b = opposite_helicity_block_run(64, 3.0, 0.005);
    CHECK(std::abs(a.rows.front().var_ndiff) < 1e-12);
    const BreakTimeEntry ea = break_time_entry(a), eb = break_time_entry(b);
    CHECK(eb.first_crossing > ea.first_crossing);
    CHECK(a.max_norm_drift() < 1e-10);
}

TEST_CASE("checkpoint round trip") {
    const QuantumState s = random_state(3, 5);
    std::stringstream ss;
    write_checkpoint(ss, Checkpoint{Basis::Circular, 0.25, 1.5, s});
    const Checkpoint c = read_checkpoint(ss);
    CHECK(c.basis == Basis::Circular);
    CHECK(c.theta == 0.25);
    CHECK(c.t == 1.5);
    CHECK(c.state.n_b().photons() == 5);
    CHECK((c.state.amplitudes() - s.amplitudes()).norm() == 0.0);
    std::stringstream bad("xx");
    CHECK_THROWS(read_checkpoint(bad));
}
