#include "polx/pulse.hpp"

#include "polx/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace polx {

double BoundaryProfile::sigma3(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= ramp_time) return 1.0;
    return 0.5 * (1.0 - std::cos(3.14159265358979323846 * t / ramp_time));
}

MeanFieldState BoundaryProfile::state(double t) const {
    const double s = sigma3(t);
    return MeanFieldState{{0.0, 0.0}, s, {0.0, 0.0}, -s};
}

PulseGrid PulseGrid::make(double L, int nz, double cfl) {
    if (!(L > 0.0)) throw ConfigError("pulse region length must be > 0");
    if (nz < 64) throw ConfigError("pulse grid needs nz >= 64");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("CFL number must lie in (0, 1]");
    const double dz = L / (nz - 1);
    return PulseGrid{L, nz, dz, cfl * dz, 0.0, 0, std::vector<MeanFieldState>(static_cast<std::size_t>(nz))};
}

namespace {

MeanFieldState axpy(const MeanFieldState& x, double a, const MeanFieldState& d) {
    return MeanFieldState{x.sigma_plus + a * d.sigma_plus, x.sigma3 + a * d.sigma3, x.tau_plus + a * d.tau_plus,
                          x.tau3 + a * d.tau3};
}

MeanFieldState rk4(const MeanFieldState& x, const MfParams& p, double coupling, double h) {
    auto f = [&](const MeanFieldState& s) {
        MeanFieldState d = mf_rhs(s, p);
        d.sigma_plus *= coupling;
        d.sigma3 *= coupling;
        d.tau_plus *= coupling;
        d.tau3 *= coupling;
        return d;
    };
    const MeanFieldState k1 = f(x);
    const MeanFieldState k2 = f(axpy(x, 0.5 * h, k1));
    const MeanFieldState k3 = f(axpy(x, 0.5 * h, k2));
    const MeanFieldState k4 = f(axpy(x, h, k3));
    MeanFieldState out = x;
    out = axpy(out, h / 6.0, k1);
    out = axpy(out, h / 3.0, k2);
    out = axpy(out, h / 3.0, k3);
    out = axpy(out, h / 6.0, k4);
    return out;
}

}  // namespace

void pulse_step(PulseGrid& grid, const PulseParams& params, const BoundaryProfile& boundary) {
    if (grid.dt > grid.dz * (1.0 + 1e-12)) throw ConfigError("CFL violation: dt > dz");
    const double c = std::min(1.0, grid.dt / grid.dz);
    const MfParams mp{params.theta, params.n1, params.n2};
    std::vector<MeanFieldState>& u = grid.fields;
    const MeanFieldState inflow = boundary.state(grid.t);

    // Sweep right to left so u[i-1] still holds the old value.
    for (std::size_t i = u.size(); i-- > 0;) {
        const MeanFieldState& left = i > 0 ? u[i - 1] : inflow;
        if (c == 1.0) {
            u[i] = left;
        } else {
            u[i] = MeanFieldState{u[i].sigma_plus - c * (u[i].sigma_plus - left.sigma_plus),
                                  u[i].sigma3 - c * (u[i].sigma3 - left.sigma3),
                                  u[i].tau_plus - c * (u[i].tau_plus - left.tau_plus), u[i].tau3 - c * (u[i].tau3 - left.tau3)};
        }
    }
    if (params.coupling != 0.0)
        for (MeanFieldState& s : u) s = rk4(s, mp, params.coupling, grid.dt);
    ++grid.step;
    grid.t = grid.step * grid.dt;
    // The inflow point is pinned to the boundary value at the new time.
    u.front() = boundary.state(grid.t);
}

std::vector<double> PulseSnapshot::sigma3() const {
    std::vector<double> out;
    out.reserve(fields.size());
    for (const MeanFieldState& s : fields) out.push_back(s.sigma3);
    return out;
}

namespace {

PulseSnapshot snapshot_of(const PulseGrid& g) {
    PulseSnapshot s{g.t, {}, g.fields};
    s.z.reserve(g.fields.size());
    for (int i = 0; i < g.nz; ++i) s.z.push_back(g.z(i));
    return s;
}

double max_sigma3_difference(const PulseSnapshot& a, const PulseSnapshot& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.fields.size(); ++i) worst = std::max(worst, std::abs(a.fields[i].sigma3 - b.fields[i].sigma3));
    return worst;
}

}  // namespace

SteadyResult run_to_steady(PulseGrid grid, const PulseParams& params, const BoundaryProfile& boundary, double t_max,
                           double snapshot_dt, double tol) {
    if (!(t_max > 0.0) || !(snapshot_dt > 0.0)) throw ConfigError("t_max and snapshot_dt must be > 0");
    const long every = std::max(1L, std::lround(snapshot_dt / grid.dt));
    const long total = std::lround(t_max / grid.dt);

    SteadyResult r;
    r.snapshots.push_back(snapshot_of(grid));
    while (grid.step < total) {
        pulse_step(grid, params, boundary);
        if (grid.step % every == 0) r.snapshots.push_back(snapshot_of(grid));
    }
    if (r.snapshots.size() < 3) throw ConfigError("run_to_steady needs at least two snapshot intervals");
    // Earliest snapshot from which every later successive difference stays below tol.
    std::size_t since = r.snapshots.size() - 1;
    while (since > 0 && max_sigma3_difference(r.snapshots[since - 1], r.snapshots[since]) < tol) --since;
    if (since >= r.snapshots.size() - 1)
        throw NumericalError("pulse profile did not become stationary by t = " + std::to_string(grid.t));
    r.steady_since = r.snapshots[since].t;
    r.steady = r.snapshots.back();
    return r;
}

double standing_residual(const std::vector<PulseSnapshot>& snapshots, double t_start) {
    std::vector<const PulseSnapshot*> late;
    for (const PulseSnapshot& s : snapshots)
        if (s.t >= t_start - 1e-12) late.push_back(&s);
    if (late.size() < 2) throw ConfigError("standing_residual needs at least two snapshots after t_start");
    double worst = 0.0;
    for (std::size_t i = 1; i < late.size(); ++i) worst = std::max(worst, max_sigma3_difference(*late[i - 1], *late[i]));
    return worst;
}

void write_snapshot_csv(std::ostream& os, const PulseSnapshot& snap) {
    os << "z,sigma3,tau3,re_sigma_plus,im_sigma_plus\n";
    os << std::setprecision(12);
    for (std::size_t i = 0; i < snap.fields.size(); ++i) {
        const MeanFieldState& s = snap.fields[i];
        os << snap.z[i] << ',' << s.sigma3 << ',' << s.tau3 << ',' << s.sigma_plus.real() << ',' << s.sigma_plus.imag() << '\n';
    }
}

void write_snapshot_manifest(std::ostream& os, const std::vector<PulseSnapshot>& snaps, const std::vector<std::string>& files) {
    if (snaps.size() != files.size()) throw ConfigError("snapshot and file lists differ in length");
    os << "t,file\n" << std::setprecision(12);
    for (std::size_t i = 0; i < snaps.size(); ++i) os << snaps[i].t << ',' << files[i] << '\n';
}

}  // namespace polx
