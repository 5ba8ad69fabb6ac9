#include "polx/quantum.hpp"

#include "polx/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>

namespace polx {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::VectorXd twice_m(BeamSize n) {
    Eigen::VectorXd d(n.dim());
    for (int k = 0; k < n.dim(); ++k) d[k] = 2.0 * n.m_of(k);
    return d;
}

double entropy_of_spectrum(const Eigen::VectorXd& lambda) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (lambda[i] > 0.0) s -= lambda[i] * std::log(lambda[i]);
    return s;
}

double ladder(BeamSize n, int k) {
    const double j = n.spin(), m = n.m_of(k);
    return std::sqrt((j - m) * (j + m + 1.0));
}

}  // namespace

EvolutionPlan EvolutionPlan::uniform(double t_end, double dt, double tol) {
    if (!(t_end > 0.0) || !(dt > 0.0)) throw ConfigError("time grid needs t_end > 0 and dt > 0");
    EvolutionPlan plan;
    const auto n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
    plan.t_grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) plan.t_grid.push_back(static_cast<double>(i) * dt);
    plan.tol = tol;
    plan.validate();
    return plan;
}

void EvolutionPlan::validate() const {
    if (t_grid.empty()) throw ConfigError("empty time grid");
    if (t_grid.front() < 0.0) throw ConfigError("time grid must start at t >= 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("time grid must be strictly increasing");
    if (!(tol > 0.0 && tol <= 1e-6)) throw ConfigError("evolution tolerance must lie in (0, 1e-6]");
}

Expectations expectations(const QuantumState& state) {
    const Eigen::MatrixXd p = state.as_matrix().cwiseAbs2();
    const Eigen::VectorXd da = twice_m(state.n_a()), db = twice_m(state.n_b());
    const double s3 = da.dot(p.rowwise().sum()) / state.n_a().photons();
    const double t3 = db.dot(p.colwise().sum().transpose()) / state.n_b().photons();
    const double st = da.dot(p * db) / (double(state.n_a().photons()) * state.n_b().photons());
    return Expectations{s3, t3, st - s3 * t3};
}

double zeta_rotated(const QuantumState& state) {
    const CMat psi = state.as_matrix();
    const SpMat s1a = rotate_basis_45(collective_op(state.n_a(), CollectiveKind::S3)).matrix;
    const SpMat s1b = rotate_basis_45(collective_op(state.n_b(), CollectiveKind::S3)).matrix;
    const double na = state.n_a().photons(), nb = state.n_b().photons();
    const CMat a_psi = s1a * psi;
    const double s1 = psi.conjugate().cwiseProduct(a_psi).sum().real() / na;
    const double t1 = psi.conjugate().cwiseProduct(psi * SpMat(s1b.transpose())).sum().real() / nb;
    const double st = psi.conjugate().cwiseProduct(a_psi * SpMat(s1b.transpose())).sum().real() / (na * nb);
    return st - s1 * t1;
}

CMat reduced_density(const QuantumState& state, Beam keep) {
    const CMat psi = state.as_matrix();
    if (keep == Beam::A) return psi * psi.adjoint();
    return psi.transpose() * psi.conjugate();
}

double entanglement_entropy(const CMat& rho) {
    if (rho.rows() != rho.cols()) throw ConfigError("density matrix must be square");
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    return entropy_of_spectrum(es.eigenvalues());
}

double variance_ndiff(const QuantumState& state, Beam beam) {
    const Eigen::MatrixXd p = state.as_matrix().cwiseAbs2();
    const Eigen::VectorXd w = beam == Beam::A ? Eigen::VectorXd(p.rowwise().sum()) : Eigen::VectorXd(p.colwise().sum().transpose());
    const Eigen::VectorXd d = twice_m(beam == Beam::A ? state.n_a() : state.n_b());
    const double mean = d.dot(w);
    return d.cwiseAbs2().dot(w) - mean * mean;
}

Observables observe_full(const CVec& psi_vec, const TwoBeamHamiltonian& h) {
    const BeamSize na = h.n_a, nb = h.n_b;
    const Eigen::Map<const RowMat> psi(psi_vec.data(), na.dim(), nb.dim());
    const Eigen::MatrixXd p = psi.cwiseAbs2();
    const Eigen::VectorXd da = twice_m(na), db = twice_m(nb);
    const Eigen::VectorXd pa = p.rowwise().sum();
    const double fa = na.photons(), fb = nb.photons();

    Observables o;
    o.sigma3 = da.dot(pa) / fa;
    o.tau3 = db.dot(p.colwise().sum().transpose()) / fb;
    o.zeta = da.dot(p * db) / (fa * fb) - o.sigma3 * o.tau3;

    const SpMat s1a = rotate_basis_45(collective_op(na, CollectiveKind::S3)).matrix;
    const SpMat s1b_t = SpMat(rotate_basis_45(collective_op(nb, CollectiveKind::S3)).matrix.transpose());
    const CMat a_psi = s1a * psi;
    o.sigma3_rot = psi.conjugate().cwiseProduct(a_psi).sum().real() / fa;
    o.tau3_rot = psi.conjugate().cwiseProduct(psi * s1b_t).sum().real() / fb;
    o.zeta_rot = psi.conjugate().cwiseProduct(a_psi * s1b_t).sum().real() / (fa * fb) - o.sigma3_rot * o.tau3_rot;

    const CMat rho = na.dim() <= nb.dim() ? CMat(psi * psi.adjoint()) : CMat(psi.adjoint() * psi);
    o.s_ent = entanglement_entropy(rho);
    o.var_ndiff = da.cwiseAbs2().dot(pa) - std::pow(da.dot(pa), 2);
    o.norm = psi_vec.norm();
    o.energy = psi_vec.dot(h.matrix * psi_vec).real() * h.time_scale();
    return o;
}

Observables observe_block(const CVec& psi, const MTotalBlock& block) {
    if (psi.size() != block.dim()) throw ConfigError("block vector has the wrong length");
    const double fa = block.n_a.photons(), fb = block.n_b.photons();
    double s3 = 0, t3 = 0, st = 0, s3sq = 0, ent = 0, rot = 0;
    for (std::size_t i = 0; i < block.index_map.size(); ++i) {
        const auto [ka, kb] = block.index_map[i];
        const double p = std::norm(psi[static_cast<Eigen::Index>(i)]);
        const double da = 2.0 * block.n_a.m_of(ka), db = 2.0 * block.n_b.m_of(kb);
        s3 += p * da;
        t3 += p * db;
        st += p * da * db;
        s3sq += p * da * da;
        // Each k_a appears once, so the reduced density matrix is diagonal.
        if (p > 0.0) ent -= p * std::log(p);
        if (i + 1 < block.index_map.size()) {
            // <S1 T1> restricted to the block is <S+ T- + S- T+>.
            const double v = ladder(block.n_a, ka) * ladder(block.n_b, kb - 1);
            rot += 2.0 * v * (std::conj(psi[static_cast<Eigen::Index>(i + 1)]) * psi[static_cast<Eigen::Index>(i)]).real();
        }
    }
    Observables o;
    o.sigma3 = s3 / fa;
    o.tau3 = t3 / fb;
    o.zeta = st / (fa * fb) - o.sigma3 * o.tau3;
    o.sigma3_rot = 0.0;
    o.tau3_rot = 0.0;
    o.zeta_rot = rot / (fa * fb);
    o.s_ent = ent;
    o.var_ndiff = s3sq - s3 * s3;
    o.norm = psi.norm();
    o.energy = psi.dot(block.matrix * psi).real() * block.time_scale();
    return o;
}

std::vector<double> ObservableSeries::column(double Observables::*field) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const Observables& o : rows) out.push_back(o.*field);
    return out;
}

double ObservableSeries::max_norm_drift() const {
    double worst = 0.0;
    for (const Observables& o : rows) worst = std::max(worst, std::abs(o.norm - 1.0));
    return worst;
}

double ObservableSeries::max_energy_drift() const {
    if (rows.empty()) return 0.0;
    const double e0 = rows.front().energy;
    const double denom = std::max(std::abs(e0), 1.0);
    double worst = 0.0;
    for (const Observables& o : rows) worst = std::max(worst, std::abs(o.energy - e0) / denom);
    return worst;
}

namespace {

void check_initial(const CVec& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw ConfigError("initial state is not normalized");
}

void check_drift(const ObservableSeries& s, double tol) {
    if (s.max_norm_drift() > tol)
        throw NumericalError("norm drift " + std::to_string(s.max_norm_drift()) + " exceeds tolerance");
    if (s.max_energy_drift() > tol)
        throw NumericalError("energy drift " + std::to_string(s.max_energy_drift()) + " exceeds tolerance");
}

}  // namespace

std::vector<QuantumState> evolve(const QuantumState& initial, const TwoBeamHamiltonian& h, const EvolutionPlan& plan) {
    plan.validate();
    check_initial(initial.amplitudes());
    if (initial.n_a() != h.n_a || initial.n_b() != h.n_b) throw ConfigError("state and Hamiltonian sizes differ");
    std::vector<QuantumState> out;
    out.reserve(plan.t_grid.size());
    const double e0 = initial.amplitudes().dot(h.matrix * initial.amplitudes()).real() * h.time_scale();
    propagate_on_grid(h.matrix, h.time_scale(), initial.amplitudes(), plan.t_grid, plan.krylov, [&](std::size_t, const CVec& psi) {
        if (std::abs(psi.norm() - 1.0) > plan.tol) throw NumericalError("norm drift exceeds tolerance");
        const double e = psi.dot(h.matrix * psi).real() * h.time_scale();
        if (std::abs(e - e0) > plan.tol * std::max(std::abs(e0), 1.0)) throw NumericalError("energy drift exceeds tolerance");
        out.emplace_back(h.n_a, h.n_b, psi);
    });
    return out;
}

ObservableSeries evolve_observables(const QuantumState& initial, const TwoBeamHamiltonian& h, const EvolutionPlan& plan,
                                    CVec* final_state) {
    plan.validate();
    check_initial(initial.amplitudes());
    if (initial.n_a() != h.n_a || initial.n_b() != h.n_b) throw ConfigError("state and Hamiltonian sizes differ");
    ObservableSeries s;
    s.n_a = h.n_a.photons();
    s.n_b = h.n_b.photons();
    s.t = plan.t_grid;
    s.rows.resize(plan.t_grid.size());
    propagate_on_grid(
        h.matrix, h.time_scale(), initial.amplitudes(), plan.t_grid, plan.krylov,
        [&](std::size_t i, const CVec& psi) {
            s.rows[i] = observe_full(psi, h);
            if (final_state && i + 1 == plan.t_grid.size()) *final_state = psi;
        },
        &s.stats);
    check_drift(s, plan.tol);
    return s;
}

ObservableSeries evolve_observables(const CVec& initial, const MTotalBlock& block, const EvolutionPlan& plan) {
    plan.validate();
    check_initial(initial);
    ObservableSeries s;
    s.n_a = block.n_a.photons();
    s.n_b = block.n_b.photons();
    s.t = plan.t_grid;
    s.rows.resize(plan.t_grid.size());
    propagate_on_grid(
        block.matrix, block.time_scale(), initial, plan.t_grid, plan.krylov,
        [&](std::size_t i, const CVec& psi) { s.rows[i] = observe_block(psi, block); }, &s.stats);
    check_drift(s, plan.tol);
    return s;
}

void write_series_csv(std::ostream& os, const ObservableSeries& series) {
    os << "t,sigma3,tau3,zeta,zeta_rot,s_ent,var_ndiff,norm,energy\n";
    os << std::setprecision(12);
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        const Observables& o = series.rows[i];
        os << series.t[i] << ',' << o.sigma3 << ',' << o.tau3 << ',' << o.zeta << ',' << o.zeta_rot << ',' << o.s_ent << ','
           << o.var_ndiff << ',' << o.norm << ',' << o.energy << '\n';
    }
}

ObservableSeries opposite_helicity_block_run(int n, double t_end, double dt, double tol) {
    const BeamSize size(n);
    const MTotalBlock block = circular_block(size, size, 0.0);
    CVec init = CVec::Zero(block.dim());
    const int pos = block.find(size.index_of(size.spin()), size.index_of(-size.spin()));
    init[pos] = 1.0;
    return evolve_observables(init, block, EvolutionPlan::uniform(t_end, dt, tol));
}

ObservableSeries plane_run(int n, double cos_theta, double t_end, double dt, double tol) {
    if (!(cos_theta >= -1.0 && cos_theta <= 1.0)) throw ConfigError("cos_theta must lie in [-1, 1]");
    const BeamSize size(n);
    const TwoBeamHamiltonian h = build_hamiltonian(Basis::Plane, std::acos(cos_theta), size, size);
    const QuantumState init = QuantumState::product(size, size.spin(), size, -size.spin());
    return evolve_observables(init, h, EvolutionPlan::uniform(t_end, dt, tol));
}

std::vector<Peak> find_peaks(std::span<const double> t, std::span<const double> y, double min_value) {
    if (t.size() != y.size()) throw ConfigError("find_peaks: t and y lengths differ");
    double top = 0.0;
    for (double v : y) top = std::max(top, v);
    const double min_prominence = 0.05 * top;
    std::vector<Peak> out;
    const std::size_t n = y.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] >= min_value)) continue;
        double left = y[i], right = y[i];
        for (std::size_t k = i; k-- > 0 && y[k] <= y[i];) left = std::min(left, y[k]);
        for (std::size_t k = i + 1; k < n && y[k] <= y[i]; ++k) right = std::min(right, y[k]);
        if (y[i] - std::max(left, right) < min_prominence) continue;

        const double x0 = t[i - 1], x1 = t[i], x2 = t[i + 1];
        const double d01 = (y[i] - y[i - 1]) / (x1 - x0), d12 = (y[i + 1] - y[i]) / (x2 - x1);
        const double a = (d12 - d01) / (x2 - x0);
        Peak pk{x1, y[i]};
        if (a < 0.0) {
            const double b = d01 - a * (x0 + x1);
            const double xv = std::clamp(-b / (2.0 * a), x0, x2);
            pk = Peak{xv, y[i - 1] + d01 * (xv - x0) + a * (xv - x0) * (xv - x1)};
        }
        out.push_back(pk);
    }
    return out;
}

std::vector<double> quadratic_crossings(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw ConfigError("quadratic_crossings: t and y lengths differ");
    std::vector<double> out;
    const std::size_t n = y.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const bool change = (y[i] > 0 && y[i + 1] <= 0) || (y[i] < 0 && y[i + 1] >= 0);
        if (!change) continue;
        if (y[i + 1] == 0.0 && i + 2 < n && ((y[i] > 0) == (y[i + 2] > 0)) && y[i + 2] != 0.0) continue;
        if (n < 3) {
            out.push_back(t[i] - y[i] * (t[i + 1] - t[i]) / (y[i + 1] - y[i]));
            continue;
        }
        const std::size_t s = i > 0 ? i - 1 : 0;
        const double x0 = t[s], x1 = t[s + 1], x2 = t[s + 2];
        const double y0 = y[s], y1 = y[s + 1], y2 = y[s + 2];
        auto eval = [&](double x) {
            return y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) + y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
                   y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
        };
        double lo = t[i], hi = t[i + 1];
        const bool lo_pos = y[i] > 0;
        for (int it = 0; it < 100 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((eval(mid) > 0) == lo_pos)
                lo = mid;
            else
                hi = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

double first_time_below(std::span<const double> t, std::span<const double> y, double level) {
    if (t.size() != y.size()) throw ConfigError("first_time_below: t and y lengths differ");
    if (!y.empty() && y[0] <= level) return t[0];
    for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] <= level) return t[i - 1] + (level - y[i - 1]) * (t[i] - t[i - 1]) / (y[i] - y[i - 1]);
    return -1.0;
}

BreakTimeEntry break_time_entry(const ObservableSeries& series, double hold_level) {
    const std::vector<double> s3 = series.column(&Observables::sigma3);
    BreakTimeEntry e;
    e.n = series.n_a;
    e.crossings = quadratic_crossings(series.t, s3);
    if (e.crossings.empty())
        throw NumericalError("no sigma3 crossing within t_end for N = " + std::to_string(series.n_a));
    e.first_crossing = e.crossings.front();

    e.min_sigma3_after_crossing = std::numeric_limits<double>::infinity();
    double t_min = series.t.back();
    for (std::size_t i = 0; i < s3.size(); ++i)
        if (series.t[i] >= e.first_crossing && s3[i] < e.min_sigma3_after_crossing) {
            e.min_sigma3_after_crossing = s3[i];
            t_min = series.t[i];
        }
    const double t_leave = first_time_below(series.t, s3, hold_level);
    double t_reach = first_time_below(series.t, s3, -hold_level);
    if (t_reach < 0.0) t_reach = t_min;
    e.hold_time = t_leave;
    e.transition_time = t_reach - t_leave;

    std::vector<double> abs_zeta = series.column(&Observables::zeta);
    for (double& z : abs_zeta) z = std::abs(z);
    e.zeta_peaks = find_peaks(series.t, abs_zeta, 1e-3);
    e.s_ent_peaks = find_peaks(series.t, series.column(&Observables::s_ent), 1e-3);
    e.var_peaks = find_peaks(series.t, series.column(&Observables::var_ndiff), 1e-3);
    return e;
}

BreakTimeReport break_time_analysis(const std::vector<ObservableSeries>& runs, double hold_level) {
    BreakTimeReport r;
    for (const ObservableSeries& s : runs) r.entries.push_back(break_time_entry(s, hold_level));
    for (std::size_t i = 1; i < r.entries.size(); ++i)
        r.increments.push_back(r.entries[i].first_crossing - r.entries[i - 1].first_crossing);
    if (r.entries.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(r.entries.size());
        for (const BreakTimeEntry& e : r.entries) {
            const double x = std::log(double(e.n));
            sx += x;
            sy += e.first_crossing;
            sxx += x * x;
            sxy += x * e.first_crossing;
        }
        r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        r.intercept = (sy - r.slope * sx) / n;
    }
    return r;
}

PlateauReport plateau_analysis(const ObservableSeries& series, double band, double rise_fraction) {
    std::vector<double> z = series.column(&Observables::zeta_rot);
    for (double& v : z) v = std::abs(v);
    if (z.size() < 3) throw ConfigError("plateau_analysis needs at least 3 samples");
    std::vector<double> sorted = z;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];

    std::vector<std::pair<std::size_t, std::size_t>> runs;  // inclusive sample ranges
    for (std::size_t i = 0; i < z.size();) {
        if (std::abs(z[i] - median) >= band) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < z.size() && std::abs(z[j + 1] - median) < band) ++j;
        runs.emplace_back(i, j);
        i = j + 1;
    }
    auto length = [&](const std::pair<std::size_t, std::size_t>& r) { return series.t[r.second] - series.t[r.first]; };
    double longest = 0.0;
    for (const auto& r : runs) longest = std::max(longest, length(r));
    if (runs.empty() || longest <= 0.0) throw NumericalError("no plateau found for N = " + std::to_string(series.n_a));
    const auto pick = *std::find_if(runs.begin(), runs.end(), [&](const auto& r) { return length(r) >= 0.25 * longest; });

    PlateauReport p{};
    p.n = series.n_a;
    p.median = median;
    p.start = series.t[pick.first];
    p.end = series.t[pick.second];
    p.hang_time = p.end - p.start;
    double sum = 0.0;
    for (std::size_t i = pick.first; i <= pick.second; ++i) {
        sum += z[i];
        p.max_abs_sigma3_rot = std::max(p.max_abs_sigma3_rot, std::abs(series.rows[i].sigma3_rot));
        p.max_abs_tau3_rot = std::max(p.max_abs_tau3_rot, std::abs(series.rows[i].tau3_rot));
    }
    p.height = sum / static_cast<double>(pick.second - pick.first + 1);
    std::vector<double> neg(z.size());
    std::transform(z.begin(), z.end(), neg.begin(), [](double v) { return -v; });
    p.rise_time = first_time_below(series.t, neg, -rise_fraction * p.height);
    return p;
}

namespace {

// Brute-force observables on the 2^(N_a+N_b) qubit register, A qubits most significant.
struct QubitRegister {
    int n_a, n_b;
    std::vector<double> s3a, s3b;  // diagonal of S3 on each beam
    std::vector<Eigen::Index> flips_a, flips_b;

    QubitRegister(int na, int nb) : n_a(na), n_b(nb) {
        const Eigen::Index dim = Eigen::Index(1) << (na + nb);
        s3a.resize(static_cast<std::size_t>(dim));
        s3b.resize(static_cast<std::size_t>(dim));
        for (Eigen::Index b = 0; b < dim; ++b) {
            const auto bits = static_cast<unsigned long long>(b);
            const int up_b = std::popcount(bits & ((1ULL << nb) - 1));
            const int up_a = std::popcount(bits >> nb);
            s3a[static_cast<std::size_t>(b)] = 2.0 * up_a - na;
            s3b[static_cast<std::size_t>(b)] = 2.0 * up_b - nb;
        }
        for (int q = 0; q < nb; ++q) flips_b.push_back(Eigen::Index(1) << q);
        for (int q = 0; q < na; ++q) flips_a.push_back(Eigen::Index(1) << (nb + q));
    }

    static CVec apply_s1(const CVec& psi, const std::vector<Eigen::Index>& flips) {
        CVec out = CVec::Zero(psi.size());
        for (Eigen::Index b = 0; b < psi.size(); ++b)
            for (Eigen::Index f : flips) out[b] += psi[b ^ f];
        return out;
    }

    Observables observe(const CVec& psi, const CMat& h, double scale) const {
        double s3 = 0, t3 = 0, st = 0, s3sq = 0;
        for (Eigen::Index b = 0; b < psi.size(); ++b) {
            const double p = std::norm(psi[b]);
            const auto k = static_cast<std::size_t>(b);
            s3 += p * s3a[k];
            t3 += p * s3b[k];
            st += p * s3a[k] * s3b[k];
            s3sq += p * s3a[k] * s3a[k];
        }
        const double fa = n_a, fb = n_b;
        Observables o;
        o.sigma3 = s3 / fa;
        o.tau3 = t3 / fb;
        o.zeta = st / (fa * fb) - o.sigma3 * o.tau3;
        const CVec a_psi = apply_s1(psi, flips_a);
        const CVec b_psi = apply_s1(psi, flips_b);
        o.sigma3_rot = psi.dot(a_psi).real() / fa;
        o.tau3_rot = psi.dot(b_psi).real() / fb;
        o.zeta_rot = a_psi.dot(b_psi).real() / (fa * fb) - o.sigma3_rot * o.tau3_rot;
        const CMat m = Eigen::Map<const RowMat>(psi.data(), Eigen::Index(1) << n_a, Eigen::Index(1) << n_b);
        Eigen::JacobiSVD<CMat> svd(m);
        o.s_ent = entropy_of_spectrum(svd.singularValues().cwiseAbs2());
        o.var_ndiff = s3sq - s3 * s3;
        o.norm = psi.norm();
        o.energy = psi.dot(h * psi).real() * scale;
        return o;
    }
};

// Product of identical single-photon states cos(b/2)|-> + e^{i phi} sin(b/2)|+>.
CVec qubit_product(int na, double beta_a, double phi_a, int nb, double beta_b, double phi_b) {
    const int n = na + nb;
    CVec v(Eigen::Index(1) << n);
    for (Eigen::Index b = 0; b < v.size(); ++b) {
        cplx amp = 1.0;
        for (int q = 0; q < n; ++q) {
            const bool up = (b >> q) & 1;
            const bool in_a = q >= nb;
            const double beta = in_a ? beta_a : beta_b, phi = in_a ? phi_a : phi_b;
            amp *= up ? std::polar(std::sin(0.5 * beta), phi) : cplx(std::cos(0.5 * beta));
        }
        v[b] = amp;
    }
    return v;
}

CVec dicke_coherent(BeamSize n, double beta, double phi) {
    CVec v(n.dim());
    for (int k = 0; k < n.dim(); ++k) {
        const double binom = std::exp(std::lgamma(n.photons() + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n.photons() - k + 1.0));
        v[k] = std::sqrt(binom) * std::pow(std::cos(0.5 * beta), n.photons() - k) * std::pow(std::sin(0.5 * beta), k) *
               std::polar(1.0, k * phi);
    }
    return v;
}

double max_difference(const Observables& a, const Observables& b) {
    const double d[] = {a.sigma3 - b.sigma3,         a.tau3 - b.tau3,     a.zeta - b.zeta,
                        a.sigma3_rot - b.sigma3_rot, a.tau3_rot - b.tau3_rot, a.zeta_rot - b.zeta_rot,
                        a.s_ent - b.s_ent,           a.var_ndiff - b.var_ndiff, a.energy - b.energy};
    double worst = 0.0;
    for (double x : d) worst = std::max(worst, std::abs(x));
    return worst;
}

}  // namespace

OracleDeviation oracle_compare(int n_a, int n_b, double theta, Basis basis, double t_end, double dt) {
    const BeamSize na(n_a), nb(n_b);
    const TwoBeamHamiltonian h = build_hamiltonian(basis, theta, na, nb);
    const CMat hb = brute_force_embed(n_a, n_b, theta, basis);
    const double scale = h.time_scale();
    const QubitRegister reg(n_a, n_b);
    const CMat iso = dicke_isometry(n_a, n_b);
    const EvolutionPlan plan = EvolutionPlan::uniform(t_end, dt);
    KrylovOptions opts;
    opts.tol = 1e-13;

    struct Case {
        CVec dicke;
        CVec qubits;
    };
    std::vector<Case> cases;
    {
        CVec d = QuantumState::product(na, na.spin(), nb, -nb.spin()).amplitudes();
        cases.push_back({d, qubit_product(n_a, 3.141592653589793, 0.0, n_b, 0.0, 0.0)});
    }
    {
        const double ba = 0.7, pa = 0.3, bb = 2.1, pb = -1.1;
        const CVec da = dicke_coherent(na, ba, pa), db = dicke_coherent(nb, bb, pb);
        CVec d(da.size() * db.size());
        for (Eigen::Index i = 0; i < da.size(); ++i) d.segment(i * db.size(), db.size()) = da[i] * db;
        cases.push_back({d, qubit_product(n_a, ba, pa, n_b, bb, pb)});
    }

    OracleDeviation dev;
    for (const Case& c : cases) {
        propagate_on_grid(h.matrix, scale, c.dicke, plan.t_grid, opts, [&](std::size_t i, const CVec& psi) {
            const CVec full = expm_dense_apply(hb, scale, plan.t_grid[i], c.qubits);
            const CVec outside = full - iso * (iso.adjoint() * full);
            dev.max_leakage = std::max(dev.max_leakage, outside.squaredNorm());
            dev.max_observable = std::max(dev.max_observable, max_difference(observe_full(psi, h), reg.observe(full, hb, scale)));
        });
    }
    return dev;
}

namespace {

template <class T>
void put_le(std::ostream& os, T value) {
    unsigned char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ConfigError("checkpoint truncated");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
    return value;
}

void put_f64(std::ostream& os, double v) { put_le(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void write_checkpoint(std::ostream& os, const Checkpoint& cp) {
    put_le(os, static_cast<std::uint32_t>(cp.state.n_a().photons()));
    put_le(os, static_cast<std::uint32_t>(cp.state.n_b().photons()));
    put_le(os, static_cast<std::uint32_t>(cp.basis == Basis::Plane ? 0 : 1));
    put_f64(os, cp.theta);
    put_f64(os, cp.t);
    for (const cplx& a : cp.state.amplitudes()) {
        put_f64(os, a.real());
        put_f64(os, a.imag());
    }
}

Checkpoint read_checkpoint(std::istream& is) {
    const auto na = get_le<std::uint32_t>(is);
    const auto nb = get_le<std::uint32_t>(is);
    const auto basis = get_le<std::uint32_t>(is);
    if (basis > 1) throw ConfigError("checkpoint: unknown basis code " + std::to_string(basis));
    const double theta = get_f64(is);
    const double t = get_f64(is);
    const BeamSize a(static_cast<int>(na)), b(static_cast<int>(nb));
    CVec amp(static_cast<Eigen::Index>(a.dim()) * b.dim());
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
        const double re = get_f64(is);
        amp[i] = cplx(re, get_f64(is));
    }
    return Checkpoint{basis == 0 ? Basis::Plane : Basis::Circular, theta, t, QuantumState(a, b, std::move(amp))};
}

}  // namespace polx
