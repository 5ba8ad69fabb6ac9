#pragma once
// Mean-field polarization dynamics of two beams.
//
// Variables are per-photon expectations sigma_+ = (sigma_1 + i sigma_2)/2,
// sigma_3 and the tau counterparts; time is in units of 1/(n_gamma R).
//
//   i dsigma_+/dt = n2 sigma_3 [s^2 + tau_+ (1+c)^2 - tau_- (1-c)^2]
//   i dsigma_3/dt = 2 n2 [s^2 (sigma_+ - sigma_-) - (sigma_+ tau_+ - sigma_- tau_-)(1-c)^2
//                        + (sigma_+ tau_- - sigma_- tau_+)(1+c)^2]
// and the tau equations by sigma <-> tau, n2 -> n1 (c = cos theta, s = sin theta).

#include "polx/error.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace polx {

struct MeanFieldState {
    std::complex<double> sigma_plus{0.0, 0.0};
    double sigma3 = 0.0;
    std::complex<double> tau_plus{0.0, 0.0};
    double tau3 = 0.0;

    std::array<double, 6> to_array() const;
    static MeanFieldState from_array(const std::array<double, 6>& a);
};

struct MfParams {
    double theta = 0.0;
    double n1 = 1.0;
    double n2 = 1.0;
};

/// Time derivative of every field (sigma_+ derivative in sigma_plus, etc.).
MeanFieldState mf_rhs(const MeanFieldState& s, const MfParams& p);

/// (2|sigma_+|)^2 + sigma_3^2
double bloch_norm_a(const MeanFieldState& s);
double bloch_norm_b(const MeanFieldState& s);

/// Conserved mean-field energy per (N1 N2 R / V):
///   sin^2(theta) (sigma_1 + tau_1) + 2 cos(theta) sigma_1 tau_1 + (1 + cos^2 theta) sigma_2 tau_2.
double mf_energy(const MeanFieldState& s, const MfParams& p);

struct MfSeries {
    MfParams params;
    std::vector<double> t;
    std::vector<MeanFieldState> state;
    std::vector<MeanFieldState> rate;  ///< mf_rhs at each sample
    std::size_t steps = 0;             ///< accepted integrator steps
};

/// Adaptive Dormand-Prince 5(4) integration with dense output, sampled every
/// dt_out. Throws NumericalError on step-size underflow.
MfSeries mf_evolve(const MeanFieldState& init, const MfParams& params, double t_end, double tol, double dt_out = 0.01);

struct CrossingReport {
    double first_crossing_time = 0.0;
    double period = 0.0;  ///< 0 when fewer than two crossings were found
    std::vector<double> crossings;
};

/// Zero crossings of sigma_3 by cubic Hermite interpolation between samples.
CrossingReport crossing_report(const MfSeries& series);

/// Zero crossings of a sampled signal using a local cubic through four samples.
CrossingReport crossing_report(std::span<const double> t, std::span<const double> y);

struct LogScalingFit {
    double slope;
    double intercept;
    double residual;      ///< max |t1 - fit|
    double mean_spacing;  ///< mean |difference| of successive t1 (ordered by angle)
};

/// Least-squares fit of first-crossing time against -log(1 - cos theta).
/// Needs >= 3 points spanning >= 3 decades in (1 - cos theta).
LogScalingFit log_scaling_fit(std::span<const std::pair<double, double>> points);

/// Jacobian of the six real equations (Re s+, Im s+, s3, Re t+, Im t+, t3).
Eigen::Matrix<double, 6, 6> mf_jacobian(const MeanFieldState& s, const MfParams& p);

/// Largest real part among the Jacobian eigenvalues.
double max_growth_rate(const MeanFieldState& s, const MfParams& p);

/// MeanFieldState with sigma_3 = 1, tau_3 = -1, sigma_+ = tau_+ = 0.
MeanFieldState opposite_helicity_state();

/// CSV columns: t, sigma3, tau3, re_sigma_plus, im_sigma_plus, re_tau_plus,
/// im_tau_plus, bloch_norm_a, bloch_norm_b, energy.
void write_mf_csv(std::ostream& os, const MfSeries& series);

}  // namespace polx
