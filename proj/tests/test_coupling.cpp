#include "generators.hpp"

#include "polx/coupling.hpp"
#include "polx/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace polx;
using polx::testing::rel_err;
using polx::testing::uniform;
using polx::testing::uniform_int;

TEST_CASE("hydrogen R matches the high-precision oracle") {
    // tests/oracles/hydrogen_coupling.py
    CHECK(rel_err(hydrogen_R(1.0, 2.69e19), 3.422446778210464e-25) < 1e-12);
    CHECK(rel_err(hydrogen_R(2.0, 2.69e19), 4 * 3.422446778210464e-25) < 1e-12);
    const CouplingConstants c = hydrogen_coupling(PhysicalInputs{});
    CHECK(rel_err(c.inverse_length / 1.8e-7, 0.4456153125) < 1e-9);
}

TEST_CASE("scaling law for the exchange length") {
    CHECK(exchange_length(PhysicalInputs{}) == 1.8e-7);
    CHECK(rel_err(exchange_length(PhysicalInputs{4, 1, 0, 1, 1, 1}), 3.6e-7) < 1e-13);
    CHECK(rel_err(exchange_length(PhysicalInputs{1, 1, 0, 2.5, 1, 1}), 4.5e-7) < 1e-13);
    CHECK(rel_err(exchange_length(PhysicalInputs{1, 1, 0, 1, 4, 4}), 7.2e-7) < 1e-13);
    CHECK_THROWS_AS(exchange_length(PhysicalInputs{1, 1, 0, -1, 1, 1}), ConfigError);
}

TEST_CASE("photon density") {
    // 1 W/cm^2 of 1 eV photons: 1 / (e c) photons per cm^3
    CHECK(photon_density(1.0, 1.0) == doctest::Approx(1.0 / (1.602176634e-19 * 2.99792458e10)).epsilon(1e-14));
}

TEST_CASE("two-photon Hamiltonian, plane basis, theta = pi/3") {
    // basis |m_a m_b>: (--), (-+), (+-), (++); sin^2 = 3/4, cos = 1/2
    const TwoBeamHamiltonian h = build_hamiltonian(Basis::Plane, std::numbers::pi / 3, BeamSize(1), BeamSize(1));
    CMat expected = CMat::Zero(4, 4);
    expected(0, 0) = 2.75;
    expected(1, 1) = -1.25;
    expected(2, 2) = -1.25;
    expected(3, 3) = -0.25;
    expected(0, 3) = expected(3, 0) = 1.0;
    expected(1, 2) = expected(2, 1) = 1.0;
    CHECK((CMat(h.matrix) - expected).norm() < 1e-14);
}

TEST_CASE("two-photon Hamiltonian, circular basis, theta = 0") {
    // 2 S1T1 + 2 S2T2 = 4 (S+T- + S-T+): only the (-+) <-> (+-) flip
    const TwoBeamHamiltonian h = build_hamiltonian(Basis::Circular, 0.0, BeamSize(1), BeamSize(1));
    CMat expected = CMat::Zero(4, 4);
    expected(1, 2) = expected(2, 1) = 4.0;
    CHECK((CMat(h.matrix) - expected).norm() < 1e-14);
    CHECK(h.conserves_total_m);
}

TEST_CASE("property: Dicke Hamiltonian equals the pairwise sum projected on the symmetric sector") {
    for (int trial = 0; trial < 12; ++trial) {
        const int na = uniform_int(1, 4), nb = uniform_int(1, 4);
        const double theta = uniform(0.0, std::numbers::pi);
        const Basis basis = trial % 2 ? Basis::Plane : Basis::Circular;
        const CMat full = brute_force_embed(na, nb, theta, basis);
        const CMat v = dicke_isometry(na, nb);
        const CMat h = CMat(build_hamiltonian(basis, theta, BeamSize(na), BeamSize(nb)).matrix);
        CHECK((v.adjoint() * full * v - h).norm() < 1e-12);
        // the symmetric sector is invariant
        CHECK((full * v - v * h).norm() < 1e-12);
    }
}

TEST_CASE("property: Hamiltonians are Hermitian") {
    for (int trial = 0; trial < 20; ++trial) {
        const Basis basis = trial % 2 ? Basis::Plane : Basis::Circular;
        const auto h = build_hamiltonian(basis, uniform(0.0, std::numbers::pi), BeamSize(uniform_int(1, 20)), BeamSize(uniform_int(1, 20)));
        CHECK(hermiticity_defect(h.matrix) == 0.0);
    }
}

TEST_CASE("total S3 is conserved only by the circular theta = 0 Hamiltonian") {
    const BeamSize n(5);
    const SpMat q = total_s3(n, n);
    auto defect = [&](Basis b, double th) {
        const SpMat h = build_hamiltonian(b, th, n, n).matrix;
        return SpMat(h * q - q * h).norm();
    };
    CHECK(defect(Basis::Circular, 0.0) == 0.0);
    CHECK(defect(Basis::Circular, 0.4) > 0.1);
    CHECK(defect(Basis::Plane, 0.0) > 0.1);
    CHECK_FALSE(build_hamiltonian(Basis::Plane, 0.0, n, n).conserves_total_m);
}

TEST_CASE("direct circular block equals the restricted full Hamiltonian") {
    for (auto [na, nb, m] : {std::tuple{4, 4, 0.0}, std::tuple{3, 5, 1.0}, std::tuple{6, 2, -2.0}}) {
        const BeamSize a(na), b(nb);
        const MTotalBlock r = block_restrict(build_hamiltonian(Basis::Circular, 0.0, a, b), m);
        const MTotalBlock d = circular_block(a, b, m);
        REQUIRE(r.dim() == d.dim());
        CHECK(r.index_map == d.index_map);
        CHECK((CMat(r.matrix) - CMat(d.matrix)).norm() < 1e-13);
        CHECK(d.time_scale() == doctest::Approx(1.0 / std::sqrt(na * nb)));
    }
    CHECK_THROWS_AS(block_restrict(build_hamiltonian(Basis::Plane, 0.0, BeamSize(2), BeamSize(2)), 0.0), ConfigError);
}

TEST_CASE("kron ordering is A outer") {
    SpMat a(2, 2), b(2, 2);
    a.insert(0, 1) = 1.0;
    b.insert(1, 0) = 2.0;
    const CMat k = CMat(kron(a, b));
    CHECK(k(1, 2) == cplx(2.0));
    CHECK(k.cwiseAbs().sum() == 2.0);
}

TEST_CASE("triplet dump round trips") {
    const SpMat h = build_hamiltonian(Basis::Circular, 0.7, BeamSize(3), BeamSize(2)).matrix;
    std::stringstream ss;
    write_triplets(ss, h);
    const SpMat back = read_triplets(ss);
    CHECK(SpMat(back - h).norm() < 1e-15);
}
