#pragma once
// Collective polarization operators of one photon beam in the permutation
// symmetric (Dicke) sector, plus the two-beam product state container.
//
// Conventions
//   * A beam of N photons is a spin j = N/2; basis |j,m>, m = -j..j, stored in
//     ascending m (index k = m + j).
//   * Operators are unnormalized sums of single-photon Pauli-like operators,
//     S_a = sum_i s_a^i, so S3 has spectrum {-N, -N+2, ..., N} and
//     [S1, S2] = 2i S3. The per-photon means are S_a / N.
//   * Two-beam states are indexed row-major, m_a outer and m_b inner.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <string_view>

namespace polx {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Number of photons in one beam.
class BeamSize {
public:
    explicit BeamSize(int n_photons);

    int photons() const { return n_; }
    int dim() const { return n_ + 1; }
    double spin() const { return 0.5 * n_; }
    /// m value of basis index k.
    double m_of(int k) const { return k - spin(); }
    /// basis index of m; m must be one of the allowed values.
    int index_of(double m) const;

    friend bool operator==(BeamSize, BeamSize) = default;

private:
    int n_;
};

enum class CollectiveKind { S1, S2, S3, Splus, Sminus, Identity };

std::string_view to_string(CollectiveKind kind);

struct CollectiveOp {
    BeamSize beam_size;
    CollectiveKind kind;
    SpMat matrix;
};

/// Dicke-basis matrix of a collective operator.
CollectiveOp collective_op(BeamSize n, CollectiveKind kind);

/// Plane-polarization axes rotated by 45 degrees: S3 maps to S1 (same handedness
/// on both beams). Only S3 is accepted.
CollectiveOp rotate_basis_45(const CollectiveOp& op);

enum class Beam { A, B };
enum class Basis { Plane, Circular };

std::string_view to_string(Basis basis);
Basis basis_from_string(std::string_view s);

/// Pure state of the two beams in the product Dicke space.
class QuantumState {
public:
    QuantumState(BeamSize na, BeamSize nb, CVec amplitudes);

    /// |m_a> (x) |m_b>.
    static QuantumState product(BeamSize na, double m_a, BeamSize nb, double m_b);

    BeamSize n_a() const { return na_; }
    BeamSize n_b() const { return nb_; }
    const CVec& amplitudes() const { return amp_; }
    std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
    std::size_t index(int ka, int kb) const { return static_cast<std::size_t>(ka) * nb_.dim() + kb; }
    cplx at(int ka, int kb) const { return amp_[static_cast<Eigen::Index>(index(ka, kb))]; }
    double norm() const { return amp_.norm(); }

    /// Amplitudes as an (N_a+1) x (N_b+1) matrix, Psi(k_a, k_b).
    CMat as_matrix() const;

private:
    BeamSize na_;
    BeamSize nb_;
    CVec amp_;
};

/// Normalized Stokes parameters of one beam (plus photon count).
struct StokesVector {
    double s0;
    double Q;
    double U;
    double V;
};

/// Plane basis: Q = <S3>/N, U = <S1>/N, V = <S2>/N. In the circular basis S3 is
/// the circular component, so V = <S3>/N, Q = -<S2>/N and U = <S1>/N.
StokesVector stokes_of(const QuantumState& state, Beam beam, Basis basis = Basis::Plane);

/// Expectation of op acting on one beam.
cplx beam_expectation(const QuantumState& state, Beam beam, const SpMat& op);

/// Coefficients of the two-beam interaction, per unit coupling g:
///   H/g = single * (K T0 + S0 K) + cross * S1 T1 + diag * K K
/// where K is S3 (plane basis) or S2 (circular basis) and S0 = N_a, T0 = N_b.
struct InteractionTerms {
    CollectiveKind axis;  ///< S3 for plane, S2 for circular
    double single;        ///< -sin^2(theta) plane, +sin^2(theta) circular
    double cross;         ///< 2 cos(theta)
    double diag;          ///< 1 + cos^2(theta)
};

InteractionTerms interaction_terms(Basis basis, double theta);

/// Full 2^(N_a+N_b) Hamiltonian obtained by summing the two-photon interaction
/// over every (i, j) pair with i in beam A and j in beam B. Qubit ordering:
/// photons of A first (most significant), single-photon basis {m=-1/2, m=+1/2}.
/// Requires N_a + N_b <= 8.
CMat brute_force_embed(int n_a, int n_b, double theta, Basis basis, double g = 1.0);

/// Isometry from the product Dicke space into the full 2^(N_a+N_b) space
/// (columns are the normalized symmetric Dicke states, tensored).
CMat dicke_isometry(int n_a, int n_b);

/// Single-photon operator in the ordered basis {m=-1/2, m=+1/2}.
Eigen::Matrix2cd single_photon_op(CollectiveKind kind);

}  // namespace polx
