#pragma once
// Physical coupling constants and the two-beam effective Hamiltonian.

#include "polx/spinspace.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace polx {

/// CODATA 2022 values used for the hydrogen coupling.
namespace constants {
inline constexpr double alpha = 7.2973525643e-3;             // fine-structure constant
inline constexpr double hbar_c_eV_cm = 1.9732698045930249e-5;  // hbar c [eV cm]
inline constexpr double electron_mass_eV = 510998.95069;      // m_e c^2 [eV]
inline constexpr double rydberg_eV = 13.605693122990;         // [Ry] [eV]
inline constexpr double hydrogen_mass_g = 1.67353286432139e-24;  // m_p + m_e [g]
inline constexpr double electron_volt_J = 1.602176634e-19;  // [J]
inline constexpr double speed_of_light_cm_s = 2.99792458e10;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

struct PhysicalInputs {
    double omega1 = 1.0;  ///< photon energy, beam 1 [eV]
    double omega2 = 1.0;  ///< photon energy, beam 2 [eV]
    double n_e = 0.0;     ///< electron density [cm^-3]
    double rho = 1.0;     ///< gas mass density [g cm^-3]
    double I1 = 1.0;      ///< intensity, beam 1 [W cm^-2]
    double I2 = 1.0;      ///< intensity, beam 2 [W cm^-2]

    /// Throws ConfigError on negative entries. Returns warnings (e.g. photon
    /// energies above the dipole regime).
    std::vector<std::string> validate() const;
};

struct CouplingConstants {
    double R;               ///< [eV cm^3]
    double g;               ///< R / V [eV]
    double n1;              ///< N1 / V [cm^-3]
    double n2;              ///< N2 / V [cm^-3]
    double inverse_length;  ///< n_gamma R / (hbar c) [cm^-1]
};

/// Hydrogen coupling R = 2529 pi^2 e^4 omega^2 n_e / (8 m_e^2 Ry^5), evaluated
/// in Heaviside-Lorentz natural units (e^2 = 4 pi alpha) and returned in eV cm^3.
double hydrogen_R(double omega_eV, double n_e_cm3);

/// Inverse exchange length from the scaling law
///   1/L = 1.8e-7 sqrt(w1 w2)/eV * rho/(g cm^-3) * sqrt(I1 I2)/(W cm^-2)  cm^-1.
double exchange_length(const PhysicalInputs& in);

/// Photon density of a beam of intensity I [W cm^-2] and photon energy omega [eV].
double photon_density(double intensity_W_cm2, double omega_eV);

/// Coupling constants built directly from hydrogen_R: n_gamma = sqrt(n1 n2),
/// R at omega = sqrt(w1 w2) and n_e = rho / m_H. Volume sets g = R / V.
CouplingConstants hydrogen_coupling(const PhysicalInputs& in, double volume_cm3 = 1.0);

/// Sparse Hermitian two-beam Hamiltonian on the product Dicke space.
struct TwoBeamHamiltonian {
    Basis basis;
    double theta;
    BeamSize n_a;
    BeamSize n_b;
    double g;
    SpMat matrix;
    bool conserves_total_m;

    Eigen::Index dim() const { return matrix.rows(); }
    /// Rescaled-time generator H / sqrt(N_a N_b): with g = 1, t' = g N t.
    double time_scale() const;
};

/// H = g [single (K T0 + S0 K) + 2 cos(theta) S1 T1 + (1 + cos^2 theta) K K]
/// with K = S3 (plane) or S2 (circular).
TwoBeamHamiltonian build_hamiltonian(Basis basis, double theta, BeamSize n_a, BeamSize n_b, double g = 1.0);

/// Total-m sector of a conserving Hamiltonian.
struct MTotalBlock {
    double total_m;
    std::vector<std::pair<int, int>> index_map;  ///< (k_a, k_b) of each block state
    SpMat matrix;
    BeamSize n_a;
    BeamSize n_b;
    double g;

    Eigen::Index dim() const { return matrix.rows(); }
    double time_scale() const;
    /// Position of (k_a, k_b) in the block, or -1.
    int find(int k_a, int k_b) const;
};

MTotalBlock block_restrict(const TwoBeamHamiltonian& h, double total_m);

/// Total-m block of the circular theta = 0 Hamiltonian 4g (S+ T- + S- T+),
/// assembled directly without the full product-space matrix.
MTotalBlock circular_block(BeamSize n_a, BeamSize n_b, double total_m, double g = 1.0);

/// Sum of (S3 x 1 + 1 x T3) as a sparse diagonal on the product space.
SpMat total_s3(BeamSize n_a, BeamSize n_b);

/// Kronecker product of two sparse matrices (A outer).
SpMat kron(const SpMat& a, const SpMat& b);

/// Max-norm of H - H^dagger.
double hermiticity_defect(const SpMat& m);

/// One "row col re im" line per stored nonzero, preceded by a "# rows cols nnz" header.
void write_triplets(std::ostream& os, const SpMat& m);
SpMat read_triplets(std::istream& is);

/// Constants table written by the rate_calc experiment.
void write_constants_table(std::ostream& os);

}  // namespace polx
