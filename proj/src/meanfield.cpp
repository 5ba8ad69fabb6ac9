#include "polx/meanfield.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace polx {

namespace odeint = boost::numeric::odeint;
using cplx = std::complex<double>;
using Array6 = std::array<double, 6>;

std::array<double, 6> MeanFieldState::to_array() const {
    return {sigma_plus.real(), sigma_plus.imag(), sigma3, tau_plus.real(), tau_plus.imag(), tau3};
}

MeanFieldState MeanFieldState::from_array(const std::array<double, 6>& a) {
    return MeanFieldState{{a[0], a[1]}, a[2], {a[3], a[4]}, a[5]};
}

MeanFieldState mf_rhs(const MeanFieldState& s, const MfParams& p) {
    const double c = std::cos(p.theta);
    const double s2 = 1.0 - c * c;
    const double cp = (1.0 + c) * (1.0 + c);
    const double cm = (1.0 - c) * (1.0 - c);
    const cplx sp = s.sigma_plus, sm = std::conj(sp);
    const cplx tp = s.tau_plus, tm = std::conj(tp);
    const cplx i(0.0, 1.0);

    MeanFieldState d;
    d.sigma_plus = -i * p.n2 * s.sigma3 * (s2 + tp * cp - tm * cm);
    d.tau_plus = -i * p.n1 * s.tau3 * (s2 + sp * cp - sm * cm);
    const cplx same = sp * tp - sm * tm;
    const cplx swap = sp * tm - sm * tp;
    d.sigma3 = (-i * 2.0 * p.n2 * (s2 * (sp - sm) - same * cm + swap * cp)).real();
    d.tau3 = (-i * 2.0 * p.n1 * (s2 * (tp - tm) - same * cm - swap * cp)).real();
    return d;
}

double bloch_norm_a(const MeanFieldState& s) { return 4.0 * std::norm(s.sigma_plus) + s.sigma3 * s.sigma3; }
double bloch_norm_b(const MeanFieldState& s) { return 4.0 * std::norm(s.tau_plus) + s.tau3 * s.tau3; }

double mf_energy(const MeanFieldState& s, const MfParams& p) {
    const double c = std::cos(p.theta);
    const double s1 = 2.0 * s.sigma_plus.real(), s2 = 2.0 * s.sigma_plus.imag();
    const double t1 = 2.0 * s.tau_plus.real(), t2 = 2.0 * s.tau_plus.imag();
    return (1.0 - c * c) * (s1 + t1) + 2.0 * c * s1 * t1 + (1.0 + c * c) * s2 * t2;
}

MeanFieldState opposite_helicity_state() { return MeanFieldState{{0.0, 0.0}, 1.0, {0.0, 0.0}, -1.0}; }

MfSeries mf_evolve(const MeanFieldState& init, const MfParams& params, double t_end, double tol, double dt_out) {
    if (!(tol > 0.0)) throw ConfigError("mf_evolve: tol must be > 0");
    if (!(t_end > 0.0)) throw ConfigError("mf_evolve: t_end must be > 0");
    if (!(dt_out > 0.0)) throw ConfigError("mf_evolve: dt_out must be > 0");
    if (bloch_norm_a(init) > 1.0 + 1e-9 || bloch_norm_b(init) > 1.0 + 1e-9)
        throw ConfigError("mf_evolve: initial Bloch vector longer than 1");

    auto system = [&params](const Array6& x, Array6& dxdt, double /*t*/) {
        dxdt = mf_rhs(MeanFieldState::from_array(x), params).to_array();
    };

    MfSeries out;
    out.params = params;
    const auto n_samples = static_cast<std::size_t>(std::floor(t_end / dt_out + 1e-9)) + 1;
    out.t.reserve(n_samples);
    out.state.reserve(n_samples);
    out.rate.reserve(n_samples);

    auto record = [&](double t, const Array6& x) {
        const MeanFieldState s = MeanFieldState::from_array(x);
        out.t.push_back(t);
        out.state.push_back(s);
        out.rate.push_back(mf_rhs(s, params));
    };

    auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<Array6>());
    stepper.initialize(init.to_array(), 0.0, std::min(1e-3, dt_out));
    record(0.0, init.to_array());

    std::size_t next = 1;
    Array6 x;
    try {
        while (next < n_samples) {
            stepper.do_step(system);
            ++out.steps;
            const double dt = stepper.current_time_step();
            if (!(dt > 1e-14 * (1.0 + std::abs(stepper.current_time()))))
                throw NumericalError("mf_evolve: step size underflow at t = " + std::to_string(stepper.current_time()));
            while (next < n_samples && next * dt_out <= stepper.current_time()) {
                const double ts = next * dt_out;
                stepper.calc_state(ts, x);
                record(ts, x);
                ++next;
            }
        }
    } catch (const odeint::step_adjustment_error& e) {
        throw NumericalError(std::string("mf_evolve: ") + e.what());
    }
    return out;
}

namespace {

// Root of the cubic Hermite interpolant on [t0, t1] with a sign change.
double hermite_root(double t0, double t1, double y0, double y1, double d0, double d1) {
    const double h = t1 - t0;
    auto eval = [&](double u) {
        const double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * d1;
    };
    double lo = 0.0, hi = 1.0, flo = y0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return t0 + 0.5 * (lo + hi) * h;
}

CrossingReport finish(std::vector<double> crossings) {
    if (crossings.empty()) throw NumericalError("no crossings found");
    CrossingReport r;
    r.first_crossing_time = crossings.front();
    if (crossings.size() >= 3)
        r.period = crossings[2] - crossings[0];
    else if (crossings.size() == 2)
        r.period = 2.0 * (crossings[1] - crossings[0]);
    r.crossings = std::move(crossings);
    return r;
}

bool changes_sign(double a, double b) { return (a > 0 && b <= 0) || (a < 0 && b >= 0); }

}  // namespace

CrossingReport crossing_report(const MfSeries& series) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < series.t.size(); ++i) {
        const double y0 = series.state[i].sigma3, y1 = series.state[i + 1].sigma3;
        if (y0 == 0.0 && i == 0) continue;
        if (!changes_sign(y0, y1)) continue;
        if (y1 == 0.0 && i + 2 < series.t.size() && !changes_sign(y0, series.state[i + 2].sigma3)) continue;
        out.push_back(hermite_root(series.t[i], series.t[i + 1], y0, y1, series.rate[i].sigma3, series.rate[i + 1].sigma3));
    }
    return finish(std::move(out));
}

CrossingReport crossing_report(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw ConfigError("crossing_report: t and y lengths differ");
    std::vector<double> out;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!changes_sign(y[i], y[i + 1])) continue;
        if (y[i + 1] == 0.0 && i + 2 < n && !changes_sign(y[i], y[i + 2])) continue;
        if (n < 4) {
            out.push_back(t[i] - y[i] * (t[i + 1] - t[i]) / (y[i + 1] - y[i]));
            continue;
        }
        // Four-point Lagrange cubic around the bracketing interval.
        const std::size_t s = std::min(n - 4, i > 0 ? i - 1 : 0);
        auto eval = [&](double x) {
            double sum = 0.0;
            for (std::size_t a = s; a < s + 4; ++a) {
                double w = y[a];
                for (std::size_t b = s; b < s + 4; ++b)
                    if (a != b) w *= (x - t[b]) / (t[a] - t[b]);
                sum += w;
            }
            return sum;
        };
        double lo = t[i], hi = t[i + 1], flo = y[i];
        for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = eval(mid);
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    return finish(std::move(out));
}

LogScalingFit log_scaling_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw ConfigError("log_scaling_fit: need at least 3 points");
    std::vector<std::pair<double, double>> pts(points.begin(), points.end());
    for (const auto& [omc, t1] : pts)
        if (!(omc > 0.0 && omc <= 2.0)) throw ConfigError("log_scaling_fit: 1 - cos(theta) must lie in (0, 2]");
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (std::log10(pts.front().first / pts.back().first) < 3.0 - 1e-12)
        throw ConfigError("log_scaling_fit: points must span at least 3 decades");

    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [omc, t1] : pts) {
        const double x = -std::log(omc);
        sx += x;
        sy += t1;
        sxx += x * x;
        sxy += x * t1;
    }
    LogScalingFit fit{};
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    for (const auto& [omc, t1] : pts)
        fit.residual = std::max(fit.residual, std::abs(t1 - (fit.intercept + fit.slope * -std::log(omc))));
    double spacing = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) spacing += std::abs(pts[i].second - pts[i - 1].second);
    fit.mean_spacing = spacing / (n - 1.0);
    return fit;
}

Eigen::Matrix<double, 6, 6> mf_jacobian(const MeanFieldState& s, const MfParams& p) {
    Eigen::Matrix<double, 6, 6> jac;
    const Array6 x0 = s.to_array();
    // Central differences are exact up to rounding: the right-hand side is quadratic.
    const double h = 1e-4;
    for (int k = 0; k < 6; ++k) {
        Array6 xp = x0, xm = x0;
        xp[k] += h;
        xm[k] -= h;
        const Array6 fp = mf_rhs(MeanFieldState::from_array(xp), p).to_array();
        const Array6 fm = mf_rhs(MeanFieldState::from_array(xm), p).to_array();
        for (int r = 0; r < 6; ++r) jac(r, k) = (fp[r] - fm[r]) / (2.0 * h);
    }
    return jac;
}

double max_growth_rate(const MeanFieldState& s, const MfParams& p) {
    Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(mf_jacobian(s, p), false);
    return es.eigenvalues().real().maxCoeff();
}

void write_mf_csv(std::ostream& os, const MfSeries& series) {
    os << "t,sigma3,tau3,re_sigma_plus,im_sigma_plus,re_tau_plus,im_tau_plus,bloch_norm_a,bloch_norm_b,energy\n";
    os << std::setprecision(12);
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        const MeanFieldState& s = series.state[i];
        os << series.t[i] << ',' << s.sigma3 << ',' << s.tau3 << ',' << s.sigma_plus.real() << ',' << s.sigma_plus.imag() << ','
           << s.tau_plus.real() << ',' << s.tau_plus.imag() << ',' << bloch_norm_a(s) << ',' << bloch_norm_b(s) << ','
           << mf_energy(s, series.params) << '\n';
    }
}

}  // namespace polx
