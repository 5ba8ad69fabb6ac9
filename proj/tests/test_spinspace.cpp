#include "generators.hpp"

#include "polx/error.hpp"
#include "polx/quantum.hpp"
#include "polx/spinspace.hpp"

#include <doctest.h>

#include <cmath>

using namespace polx;
using polx::testing::random_state;
using polx::testing::uniform_int;

namespace {
CMat dense(CollectiveKind k, int n) { return CMat(collective_op(BeamSize(n), k).matrix); }
}  // namespace

TEST_CASE("BeamSize indexing") {
    const BeamSize b(5);
    CHECK(b.dim() == 6);
    CHECK(b.spin() == 2.5);
    CHECK(b.m_of(0) == -2.5);
    CHECK(b.index_of(1.5) == 4);
    CHECK_THROWS_AS(b.index_of(0.0), ConfigError);
    CHECK_THROWS_AS(BeamSize(-1), ConfigError);
}

TEST_CASE("S3 is 2m on the Dicke basis and S+ raises m") {
    const CMat s3 = dense(CollectiveKind::S3, 4);
    const CMat sp = dense(CollectiveKind::Splus, 4);
    for (int k = 0; k <= 4; ++k) CHECK(s3(k, k).real() == doctest::Approx(2.0 * (k - 2.0)));
    // <m+1|S+|m> = sqrt((j-m)(j+m+1)) with j = 2
    CHECK(sp(1, 0).real() == doctest::Approx(2.0));
    CHECK(sp(2, 1).real() == doctest::Approx(std::sqrt(6.0)));
    CHECK(sp(0, 1) == cplx(0.0));
}

TEST_CASE("property: S- is the adjoint of S+, S1 and S2 are Hermitian") {
    for (int trial = 0; trial < 20; ++trial) {
        const int n = uniform_int(1, 30);
        CHECK((dense(CollectiveKind::Sminus, n) - dense(CollectiveKind::Splus, n).adjoint()).norm() == 0.0);
        const CMat s1 = dense(CollectiveKind::S1, n), s2 = dense(CollectiveKind::S2, n);
        CHECK((s1 - s1.adjoint()).norm() == 0.0);
        CHECK((s2 - s2.adjoint()).norm() < 1e-14);
    }
}

TEST_CASE("property: Casimir and commutation relations") {
    const cplx two_i(0.0, 2.0);
    for (int n = 1; n <= 16; ++n) {
        const CMat s1 = dense(CollectiveKind::S1, n), s2 = dense(CollectiveKind::S2, n), s3 = dense(CollectiveKind::S3, n);
        const CMat id = CMat::Identity(n + 1, n + 1);
        CHECK((s1 * s1 + s2 * s2 + s3 * s3 - n * (n + 2.0) * id).norm() < 1e-11);
        CHECK((s1 * s2 - s2 * s1 - two_i * s3).norm() < 1e-11);
        CHECK((s2 * s3 - s3 * s2 - two_i * s1).norm() < 1e-11);
        CHECK((s3 * s1 - s1 * s3 - two_i * s2).norm() < 1e-11);
    }
}

TEST_CASE("single photon operators are the Pauli matrices in {-1/2, +1/2}") {
    const Eigen::Matrix2cd s3 = single_photon_op(CollectiveKind::S3);
    CHECK(s3(0, 0) == cplx(-1.0));
    CHECK(s3(1, 1) == cplx(1.0));
    for (auto k : {CollectiveKind::S1, CollectiveKind::S2, CollectiveKind::S3, CollectiveKind::Splus})
        CHECK((single_photon_op(k) - CMat(collective_op(BeamSize(1), k).matrix)).norm() < 1e-15);
}

TEST_CASE("rotated S3 has the spectrum of S3 and equals S1") {
    for (int n : {1, 2, 7}) {
        const CollectiveOp r = rotate_basis_45(collective_op(BeamSize(n), CollectiveKind::S3));
        CHECK((CMat(r.matrix) - dense(CollectiveKind::S1, n)).norm() < 1e-14);
        Eigen::SelfAdjointEigenSolver<CMat> es{CMat(r.matrix)};
        for (int k = 0; k <= n; ++k) CHECK(es.eigenvalues()[k] == doctest::Approx(2.0 * k - n));
    }
    CHECK_THROWS_AS(rotate_basis_45(collective_op(BeamSize(2), CollectiveKind::S1)), ConfigError);
}

TEST_CASE("Dicke isometry has orthonormal symmetric columns") {
    for (auto [na, nb] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{4, 4}}) {
        const CMat v = dicke_isometry(na, nb);
        CHECK(v.rows() == (1 << (na + nb)));
        CHECK((v.adjoint() * v - CMat::Identity(v.cols(), v.cols())).norm() < 1e-13);
    }
}

TEST_CASE("product state and Stokes parameters") {
    const BeamSize n(4);
    const QuantumState s = QuantumState::product(n, 2.0, n, -1.0);
    CHECK(s.norm() == doctest::Approx(1.0));
    CHECK(s.at(4, 1) == cplx(1.0));
    const StokesVector a = stokes_of(s, Beam::A), b = stokes_of(s, Beam::B);
    CHECK(a.s0 == 4.0);
    CHECK(a.Q == doctest::Approx(1.0));
    CHECK(b.Q == doctest::Approx(-0.5));
    CHECK(a.U == doctest::Approx(0.0));
    const StokesVector c = stokes_of(s, Beam::A, Basis::Circular);
    CHECK(c.V == doctest::Approx(1.0));
    CHECK(c.Q == doctest::Approx(0.0));
}

TEST_CASE("property: normalized Stokes vectors of random states lie in the unit ball") {
    for (int trial = 0; trial < 50; ++trial) {
        const QuantumState s = random_state(uniform_int(1, 8), uniform_int(1, 8));
        for (Beam b : {Beam::A, Beam::B}) {
            const StokesVector v = stokes_of(s, b);
            CHECK(v.Q * v.Q + v.U * v.U + v.V * v.V <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("basis names round trip") {
    CHECK(basis_from_string(to_string(Basis::Plane)) == Basis::Plane);
    CHECK(basis_from_string(to_string(Basis::Circular)) == Basis::Circular);
    CHECK_THROWS_AS(basis_from_string("elliptic"), ConfigError);
}
