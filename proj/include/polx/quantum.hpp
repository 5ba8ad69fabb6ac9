#pragma once
// Exact two-beam evolution in the product Dicke space and its diagnostics.
//
// Time is rescaled: the generator is H / sqrt(N_a N_b), so with g = 1 one unit
// of time is 1/(g N). Entropies are in nats.

#include "polx/coupling.hpp"
#include "polx/propagator.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace polx {

struct EvolutionPlan {
    std::vector<double> t_grid;
    double tol = 1e-8;  ///< allowed norm drift and relative energy drift
    KrylovOptions krylov{};

    /// 0, dt, 2 dt, ..., t_end (inclusive up to rounding).
    static EvolutionPlan uniform(double t_end, double dt, double tol = 1e-8);
    void validate() const;
};

struct Expectations {
    double sigma3;
    double tau3;
    double zeta;  ///< <sigma3 tau3> - <sigma3><tau3>
};

Expectations expectations(const QuantumState& state);

/// zeta' = <sigma1 tau1> - <sigma1><tau1> (rotated axes sigma3' = sigma1, tau3' = tau1).
double zeta_rotated(const QuantumState& state);

/// rho[m, m'] = sum_{m_other} psi psi^* for the kept beam.
CMat reduced_density(const QuantumState& state, Beam keep);

/// -sum lambda log(lambda) over the eigenvalues, 0 log 0 = 0 (nats).
double entanglement_entropy(const CMat& rho);

/// <S3^2> - <S3>^2 of one beam (unnormalized S3 = N_up - N_down).
double variance_ndiff(const QuantumState& state, Beam beam);

/// One sample of every tracked observable.
struct Observables {
    double sigma3 = 0, tau3 = 0, zeta = 0;
    double sigma3_rot = 0, tau3_rot = 0, zeta_rot = 0;
    double s_ent = 0;
    double var_ndiff = 0;  ///< beam A
    double norm = 0;
    double energy = 0;  ///< <psi| H / sqrt(N_a N_b) |psi>
};

/// Observables of a full product-space vector, with energy from `h`.
Observables observe_full(const CVec& psi, const TwoBeamHamiltonian& h);

/// Observables of a vector living in a total-m block.
Observables observe_block(const CVec& psi, const MTotalBlock& block);

struct ObservableSeries {
    int n_a = 0;
    int n_b = 0;
    std::vector<double> t;
    std::vector<Observables> rows;
    PropagationStats stats{};

    std::vector<double> column(double Observables::*field) const;
    double max_norm_drift() const;
    /// max |E(t) - E(0)| / max(|E(0)|, 1)
    double max_energy_drift() const;
};

/// States at every grid time.
std::vector<QuantumState> evolve(const QuantumState& initial, const TwoBeamHamiltonian& h, const EvolutionPlan& plan);

/// Observables at every grid time. Throws NumericalError when norm or energy
/// drift exceeds plan.tol. Optionally returns the final state.
ObservableSeries evolve_observables(const QuantumState& initial, const TwoBeamHamiltonian& h, const EvolutionPlan& plan,
                                    CVec* final_state = nullptr);
ObservableSeries evolve_observables(const CVec& initial, const MTotalBlock& block, const EvolutionPlan& plan);

/// CSV columns: t, sigma3, tau3, zeta, zeta_rot, s_ent, var_ndiff, norm, energy.
void write_series_csv(std::ostream& os, const ObservableSeries& series);

/// Circular basis, theta = 0, |m_a = j, m_b = -j>, evolved in the total_m = 0 block.
ObservableSeries opposite_helicity_block_run(int n, double t_end, double dt, double tol = 1e-8);

/// Plane basis at the given cos(theta), |m_a = j, m_b = -j>, full product space.
ObservableSeries plane_run(int n, double cos_theta, double t_end, double dt, double tol = 1e-8);

struct Peak {
    double t;
    double value;
};

/// Local maxima above `min_value`, refined by a parabola through three samples.
std::vector<Peak> find_peaks(std::span<const double> t, std::span<const double> y, double min_value);

/// Zero crossings refined by a local quadratic through three samples.
std::vector<double> quadratic_crossings(std::span<const double> t, std::span<const double> y);

/// First time y falls to or below `level` (linear interpolation), or -1.
double first_time_below(std::span<const double> t, std::span<const double> y, double level);

struct BreakTimeEntry {
    int n;
    double first_crossing;
    std::vector<double> crossings;
    double min_sigma3_after_crossing;
    double hold_time;        ///< time spent with |sigma3| >= hold_level before the turnover completes
    double transition_time;  ///< remaining time until sigma3 first reaches -hold_level
    std::vector<Peak> zeta_peaks;   ///< of |zeta|
    std::vector<Peak> s_ent_peaks;
    std::vector<Peak> var_peaks;
};

struct BreakTimeReport {
    std::vector<BreakTimeEntry> entries;
    double slope = 0;      ///< first crossing vs log N
    double intercept = 0;
    std::vector<double> increments;  ///< successive first-crossing differences
};

/// hold_level = 0.98 (2% of full polarization).
BreakTimeEntry break_time_entry(const ObservableSeries& series, double hold_level = 0.98);
BreakTimeReport break_time_analysis(const std::vector<ObservableSeries>& runs, double hold_level = 0.98);

struct PlateauReport {
    int n;
    double median;
    double start;
    double end;
    double height;
    double hang_time;
    double rise_time;  ///< first time |zeta'| reaches rise_fraction * height
    double max_abs_sigma3_rot;
    double max_abs_tau3_rot;
};

/// Plateau of |zeta'|: runs of samples with ||zeta'| - median| < band; the
/// plateau is the earliest run at least a quarter as long as the longest.
PlateauReport plateau_analysis(const ObservableSeries& series, double band = 0.05, double rise_fraction = 0.9);

struct OracleDeviation {
    double max_observable = 0;  ///< over sigma3, tau3, zeta, zeta', S_ent, variance, energy
    double max_leakage = 0;     ///< weight of the brute-force state outside the symmetric sector
};

/// Compares Dicke-space Krylov evolution against brute-force evolution in the
/// full 2^(N_a+N_b) space for the opposite-helicity state and a tilted product state.
OracleDeviation oracle_compare(int n_a, int n_b, double theta, Basis basis, double t_end, double dt);

/// Binary checkpoint, little endian:
///   uint32 N_a, uint32 N_b, uint32 basis (0 plane, 1 circular), f64 theta, f64 t,
///   then (N_a+1)(N_b+1) pairs of f64 (re, im).
struct Checkpoint {
    Basis basis;
    double theta;
    double t;
    QuantumState state;
};

void write_checkpoint(std::ostream& os, const Checkpoint& cp);
Checkpoint read_checkpoint(std::istream& is);

}  // namespace polx
