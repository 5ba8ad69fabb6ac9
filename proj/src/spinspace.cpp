#include "polx/spinspace.hpp"

#include "polx/error.hpp"

#include <cmath>
#include <vector>

namespace polx {

BeamSize::BeamSize(int n_photons) : n_(n_photons) {
    if (n_photons < 1) throw ConfigError("beam size must be >= 1 photon, got " + std::to_string(n_photons));
}

int BeamSize::index_of(double m) const {
    const double k = m + spin();
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 || kr < 0 || kr > n_)
        throw ConfigError("m = " + std::to_string(m) + " is not a valid projection for N = " + std::to_string(n_));
    return static_cast<int>(kr);
}

std::string_view to_string(CollectiveKind kind) {
    switch (kind) {
        case CollectiveKind::S1: return "S1";
        case CollectiveKind::S2: return "S2";
        case CollectiveKind::S3: return "S3";
        case CollectiveKind::Splus: return "Splus";
        case CollectiveKind::Sminus: return "Sminus";
        case CollectiveKind::Identity: return "Identity";
    }
    return "?";
}

std::string_view to_string(Basis basis) { return basis == Basis::Plane ? "plane" : "circular"; }

Basis basis_from_string(std::string_view s) {
    if (s == "plane") return Basis::Plane;
    if (s == "circular") return Basis::Circular;
    throw ConfigError("unknown basis '" + std::string(s) + "' (expected plane|circular)");
}

CollectiveOp collective_op(BeamSize n, CollectiveKind kind) {
    const int dim = n.dim();
    const double j = n.spin();
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(2 * static_cast<std::size_t>(dim));

    // <j,m+1| S+ |j,m> = sqrt((j-m)(j+m+1)), stored at (row k+1, col k).
    auto ladder = [&](int k) {
        const double m = n.m_of(k);
        return std::sqrt((j - m) * (j + m + 1.0));
    };

    for (int k = 0; k < dim; ++k) {
        switch (kind) {
            case CollectiveKind::S3: trip.emplace_back(k, k, cplx(2.0 * n.m_of(k), 0.0)); break;
            case CollectiveKind::Identity: trip.emplace_back(k, k, cplx(1.0, 0.0)); break;
            case CollectiveKind::Splus:
                if (k + 1 < dim) trip.emplace_back(k + 1, k, cplx(ladder(k), 0.0));
                break;
            case CollectiveKind::Sminus:
                if (k + 1 < dim) trip.emplace_back(k, k + 1, cplx(ladder(k), 0.0));
                break;
            case CollectiveKind::S1:
                if (k + 1 < dim) {
                    trip.emplace_back(k + 1, k, cplx(ladder(k), 0.0));
                    trip.emplace_back(k, k + 1, cplx(ladder(k), 0.0));
                }
                break;
            case CollectiveKind::S2:
                // (S+ - S-)/i = -i S+ + i S-
                if (k + 1 < dim) {
                    trip.emplace_back(k + 1, k, cplx(0.0, -ladder(k)));
                    trip.emplace_back(k, k + 1, cplx(0.0, ladder(k)));
                }
                break;
        }
    }
    SpMat m(dim, dim);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return CollectiveOp{n, kind, std::move(m)};
}

CollectiveOp rotate_basis_45(const CollectiveOp& op) {
    if (op.kind != CollectiveKind::S3)
        throw ConfigError("rotate_basis_45 supports only S3, got " + std::string(to_string(op.kind)));
    return collective_op(op.beam_size, CollectiveKind::S1);
}

QuantumState::QuantumState(BeamSize na, BeamSize nb, CVec amplitudes) : na_(na), nb_(nb), amp_(std::move(amplitudes)) {
    if (amp_.size() != static_cast<Eigen::Index>(na.dim()) * nb.dim())
        throw ConfigError("amplitude vector has length " + std::to_string(amp_.size()) + ", expected " +
                          std::to_string(na.dim() * nb.dim()));
}

QuantumState QuantumState::product(BeamSize na, double m_a, BeamSize nb, double m_b) {
    CVec v = CVec::Zero(static_cast<Eigen::Index>(na.dim()) * nb.dim());
    v[static_cast<Eigen::Index>(na.index_of(m_a)) * nb.dim() + nb.index_of(m_b)] = 1.0;
    return QuantumState(na, nb, std::move(v));
}

CMat QuantumState::as_matrix() const {
    // Row-major layout (m_a outer) maps directly onto a row-major matrix.
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    return Eigen::Map<const RowMat>(amp_.data(), na_.dim(), nb_.dim());
}

cplx beam_expectation(const QuantumState& state, Beam beam, const SpMat& op) {
    const CMat psi = state.as_matrix();
    if (beam == Beam::A) {
        if (op.rows() != state.n_a().dim()) throw ConfigError("operator dimension does not match beam A");
        const CMat applied = op * psi;
        return (psi.conjugate().cwiseProduct(applied)).sum();
    }
    if (op.rows() != state.n_b().dim()) throw ConfigError("operator dimension does not match beam B");
    const CMat applied = psi * SpMat(op.transpose());
    return (psi.conjugate().cwiseProduct(applied)).sum();
}

StokesVector stokes_of(const QuantumState& state, Beam beam, Basis basis) {
    const BeamSize n = beam == Beam::A ? state.n_a() : state.n_b();
    const double inv_n = 1.0 / n.photons();
    auto mean = [&](CollectiveKind k) { return beam_expectation(state, beam, collective_op(n, k).matrix).real() * inv_n; };
    const double s1 = mean(CollectiveKind::S1);
    const double s2 = mean(CollectiveKind::S2);
    const double s3 = mean(CollectiveKind::S3);
    if (basis == Basis::Plane) return StokesVector{double(n.photons()), s3, s1, s2};
    return StokesVector{double(n.photons()), -s2, s1, s3};
}

InteractionTerms interaction_terms(Basis basis, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    if (basis == Basis::Plane) return InteractionTerms{CollectiveKind::S3, -s * s, 2.0 * c, 1.0 + c * c};
    return InteractionTerms{CollectiveKind::S2, s * s, 2.0 * c, 1.0 + c * c};
}

Eigen::Matrix2cd single_photon_op(CollectiveKind kind) {
    return CMat(collective_op(BeamSize(1), kind).matrix);
}

namespace {

// Operator `op` on qubit `pos` (0 = most significant) of an n-qubit register.
CMat embed_site(const Eigen::Matrix2cd& op, int pos, int n) {
    CMat out = CMat::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
        const CMat factor = (q == pos) ? CMat(op) : CMat(CMat::Identity(2, 2));
        CMat next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * factor;
        out = std::move(next);
    }
    return out;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

CMat brute_force_embed(int n_a, int n_b, double theta, Basis basis, double g) {
    if (n_a < 1 || n_b < 1) throw ConfigError("brute_force_embed needs at least one photon per beam");
    if (n_a + n_b > 8) throw ConfigError("brute_force_embed is limited to N_a + N_b <= 8");
    const int n = n_a + n_b;
    const InteractionTerms terms = interaction_terms(basis, theta);
    const Eigen::Matrix2cd s1 = single_photon_op(CollectiveKind::S1);
    const Eigen::Matrix2cd axis = single_photon_op(terms.axis);

    std::vector<CMat> s1_site, axis_site;
    for (int q = 0; q < n; ++q) {
        s1_site.push_back(embed_site(s1, q, n));
        axis_site.push_back(embed_site(axis, q, n));
    }
    const Eigen::Index dim = Eigen::Index(1) << n;
    CMat h = CMat::Zero(dim, dim);
    for (int i = 0; i < n_a; ++i) {
        for (int jb = 0; jb < n_b; ++jb) {
            const int j = n_a + jb;
            h += terms.single * (axis_site[i] + axis_site[j]);
            h += terms.cross * s1_site[i] * s1_site[j];
            h += terms.diag * axis_site[i] * axis_site[j];
        }
    }
    return g * h;
}

CMat dicke_isometry(int n_a, int n_b) {
    if (n_a + n_b > 12) throw ConfigError("dicke_isometry is limited to N_a + N_b <= 12");
    auto dicke = [](int n) {
        CMat d = CMat::Zero(Eigen::Index(1) << n, n + 1);
        for (Eigen::Index bits = 0; bits < d.rows(); ++bits) {
            const int k = __builtin_popcountll(static_cast<unsigned long long>(bits));
            d(bits, k) = 1.0 / std::sqrt(binomial(n, k));
        }
        return d;
    };
    const CMat da = dicke(n_a);
    const CMat db = dicke(n_b);
    CMat iso = CMat::Zero(da.rows() * db.rows(), da.cols() * db.cols());
    for (Eigen::Index ra = 0; ra < da.rows(); ++ra)
        for (Eigen::Index ka = 0; ka < da.cols(); ++ka) {
            if (da(ra, ka) == cplx(0.0)) continue;
            iso.block(ra * db.rows(), ka * db.cols(), db.rows(), db.cols()) = da(ra, ka) * db;
        }
    return iso;
}

}  // namespace polx
