#include "generators.hpp"

#include "polx/coupling.hpp"
#include "polx/propagator.hpp"

#include <doctest.h>

#include <numbers>

using namespace polx;
using polx::testing::random_vector;
using polx::testing::uniform;

TEST_CASE("Lanczos matches dense exponentiation") {
    for (Basis b : {Basis::Plane, Basis::Circular}) {
        const TwoBeamHamiltonian h = build_hamiltonian(b, 0.7, BeamSize(4), BeamSize(4));
        const CVec psi0 = random_vector(h.dim());
        CVec psi = psi0;
        LanczosPropagator prop(h.matrix, h.time_scale());
        prop.advance(psi, 3.0);
        const CVec ref = expm_dense_apply(CMat(h.matrix), h.time_scale(), 3.0, psi0);
        CHECK((psi - ref).norm() < 1e-9);
        CHECK(prop.stats().matvecs > 0);
    }
}

TEST_CASE("property: propagation is unitary and composes") {
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = build_hamiltonian(Basis::Plane, uniform(0.0, std::numbers::pi), BeamSize(6), BeamSize(5));
        const CVec psi0 = random_vector(h.dim());
        const double t1 = uniform(0.1, 2.0), t2 = uniform(0.1, 2.0);
        CVec a = psi0, b = psi0;
        LanczosPropagator p(h.matrix, h.time_scale());
        p.advance(a, t1);
        p.advance(a, t2);
        p.advance(b, t1 + t2);
        CHECK(std::abs(a.norm() - 1.0) < 1e-12);
        CHECK((a - b).norm() < 1e-10);
    }
}

TEST_CASE("grid sampling visits every time in order") {
    const auto h = build_hamiltonian(Basis::Circular, 0.0, BeamSize(3), BeamSize(3));
    const CVec psi0 = random_vector(h.dim());
    std::vector<double> grid{0.0, 0.5, 1.25, 2.0};
    std::vector<std::size_t> seen;
    PropagationStats stats;
    propagate_on_grid(h.matrix, 1.0, psi0, grid, {}, [&](std::size_t i, const CVec& psi) {
        seen.push_back(i);
        CHECK((psi - expm_dense_apply(CMat(h.matrix), 1.0, grid[i], psi0)).norm() < 1e-9);
    }, &stats);
    CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(stats.steps >= 3);
}
