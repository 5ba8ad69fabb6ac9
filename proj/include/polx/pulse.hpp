#pragma once
// Co-moving two-beam pulse transport: the mean-field equations with
// d/dt replaced by d/dt + d/dz (c = 1), driven from z = 0.

#include "polx/meanfield.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace polx {

/// sigma3(0, t) rises from 0 to 1 by a half-cosine over ramp_time, then holds.
/// sigma_+(0, t) = 0 and the tau fields are the negatives.
struct BoundaryProfile {
    double ramp_time = 0.05;

    double sigma3(double t) const;
    MeanFieldState state(double t) const;
};

struct PulseParams {
    double theta = 0.0;
    double n1 = 1.0;
    double n2 = 1.0;
    double coupling = 1.0;  ///< multiplies the mean-field source; 0 gives pure advection
};

struct PulseGrid {
    double L;
    int nz;
    double dz;
    double dt;
    double t = 0.0;
    long step = 0;
    std::vector<MeanFieldState> fields;  ///< zero initial interior data

    /// Grid of nz points on [0, L] with dt = cfl * dz. Requires nz >= 64, 0 < cfl <= 1.
    static PulseGrid make(double L, int nz, double cfl = 1.0);
    double z(int i) const { return i * dz; }
};

/// One step: upwind transport (an exact shift when dt = dz) followed by an RK4
/// integration of the local source over dt. Inflow at z = 0 from the boundary.
/// Throws ConfigError when dt > dz.
void pulse_step(PulseGrid& grid, const PulseParams& params, const BoundaryProfile& boundary);

struct PulseSnapshot {
    double t;
    std::vector<double> z;
    std::vector<MeanFieldState> fields;

    std::vector<double> sigma3() const;
};

struct SteadyResult {
    std::vector<PulseSnapshot> snapshots;
    PulseSnapshot steady;     ///< last snapshot
    double steady_since;      ///< first snapshot time after which successive snapshots differ by < tol
};

/// Advances to t_max, recording a snapshot every snapshot_dt (rounded to whole steps).
/// Throws NumericalError when successive late snapshots still differ by >= tol.
SteadyResult run_to_steady(PulseGrid grid, const PulseParams& params, const BoundaryProfile& boundary, double t_max,
                           double snapshot_dt, double tol = 0.01);

/// max over z and successive snapshot pairs with t >= t_start of |sigma3 difference|.
double standing_residual(const std::vector<PulseSnapshot>& snapshots, double t_start);

/// CSV columns: z, sigma3, tau3, re_sigma_plus, im_sigma_plus.
void write_snapshot_csv(std::ostream& os, const PulseSnapshot& snap);

/// CSV columns: t, file.
void write_snapshot_manifest(std::ostream& os, const std::vector<PulseSnapshot>& snaps, const std::vector<std::string>& files);

}  // namespace polx
