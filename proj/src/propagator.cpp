#include "polx/propagator.hpp"

#include "polx/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace polx {

namespace {

struct TridiagExp {
    Eigen::VectorXd eval;
    Eigen::MatrixXd evec;

    TridiagExp(const std::vector<double>& alpha, const std::vector<double>& beta) {
        const auto n = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        eval = es.eigenvalues();
        evec = es.eigenvectors();
    }

    // exp(-i tau T) e1
    CVec apply_e1(double tau) const {
        CVec coef(eval.size());
        for (Eigen::Index i = 0; i < eval.size(); ++i) coef[i] = std::exp(cplx(0.0, -tau * eval[i])) * evec(0, i);
        return evec.cast<cplx>() * coef;
    }

    // |last component of exp(-i tau T) e1|. A Taylor sum keeps relative accuracy
    // when the component is tiny; the spectral form is used for long steps.
    double last_component(double tau, const std::vector<double>& alpha, const std::vector<double>& beta) const {
        const auto n = static_cast<Eigen::Index>(alpha.size());
        const double spread = tau * eval.cwiseAbs().maxCoeff();
        if (spread > 8.0) return std::abs(apply_e1(tau)[n - 1]);
        CVec term = CVec::Zero(n), sum = CVec::Zero(n);
        term[0] = 1.0;
        sum[0] = 1.0;
        for (int order = 1; order < 200; ++order) {
            CVec next(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                cplx v = alpha[static_cast<std::size_t>(i)] * term[i];
                if (i > 0) v += beta[static_cast<std::size_t>(i - 1)] * term[i - 1];
                if (i + 1 < n) v += beta[static_cast<std::size_t>(i)] * term[i + 1];
                next[i] = cplx(0.0, -tau / order) * v;
            }
            term = next;
            sum += term;
            if (order >= n && std::abs(term[n - 1]) <= 1e-17 * std::abs(sum[n - 1]) && term.norm() < 1e-17) break;
        }
        return std::abs(sum[n - 1]);
    }
};

}  // namespace

LanczosPropagator::LanczosPropagator(const SpMat& h, double scale, KrylovOptions opts) : h_(h), scale_(scale), opts_(opts) {
    if (h.rows() != h.cols()) throw ConfigError("propagator needs a square Hamiltonian");
    if (opts.max_dim < 2) throw ConfigError("Krylov dimension must be >= 2");
    if (!(opts.tol > 0.0)) throw ConfigError("propagator tolerance must be > 0");
}

void LanczosPropagator::advance(CVec& psi, double dt) {
    if (dt < 0.0) throw ConfigError("cannot propagate backwards");
    double remaining = dt;
    const auto max_dim = static_cast<std::size_t>(std::min<Eigen::Index>(opts_.max_dim, h_.rows()));
    std::vector<CVec> basis;
    basis.reserve(max_dim);
    while (remaining > 0.0) {
        const double beta0 = psi.norm();
        if (beta0 == 0.0) return;
        basis.clear();
        basis.push_back(psi / beta0);
        std::vector<double> alpha, beta;
        double tau = 0.0;
        CVec coef;
        for (std::size_t k = 0;; ++k) {
            CVec w = scale_ * (h_ * basis[k]);
            ++stats_.matvecs;
            const double a = basis[k].dot(w).real();
            alpha.push_back(a);
            // Full reorthogonalization keeps the small basis orthonormal to rounding.
            for (const CVec& v : basis) w -= v.dot(w) * v;
            const double b = w.norm();
            const TridiagExp te(alpha, beta);
            const double scale_norm = std::abs(a) + (beta.empty() ? 0.0 : beta.back()) + 1.0;
            auto error = [&](double t) { return beta0 * b * te.last_component(t, alpha, beta); };
            auto allowed = [&](double t) { return std::max(opts_.tol * t, 1e-15 * beta0); };

            if (b <= 1e-14 * scale_norm || error(remaining) <= allowed(remaining)) {
                tau = remaining;
            } else if (k + 1 == max_dim) {
                double lo = remaining;
                while (error(lo) > allowed(lo)) {
                    lo *= 0.5;
                    if (lo < 1e-14 * (1.0 + dt))
                        throw NumericalError("Krylov step size underflow (dt = " + std::to_string(lo) + ")");
                }
                double hi = std::min(2.0 * lo, remaining);
                for (int it = 0; it < 30 && hi - lo > 1e-3 * lo; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (error(mid) <= allowed(mid))
                        lo = mid;
                    else
                        hi = mid;
                }
                tau = lo;
            }
            if (tau > 0.0) {
                coef = te.apply_e1(tau);
                stats_.error_bound += error(tau);
                break;
            }
            beta.push_back(b);
            basis.push_back(w / b);
        }
        CVec next = CVec::Zero(psi.size());
        for (std::size_t i = 0; i < basis.size() && i < static_cast<std::size_t>(coef.size()); ++i)
            next += coef[static_cast<Eigen::Index>(i)] * basis[i];
        psi = beta0 * next;
        remaining = (tau >= remaining) ? 0.0 : remaining - tau;
        ++stats_.steps;
    }
}

void propagate_on_grid(const SpMat& h, double scale, CVec psi, const std::vector<double>& t_grid, KrylovOptions opts,
                       const std::function<void(std::size_t, const CVec&)>& sample, PropagationStats* stats) {
    LanczosPropagator prop(h, scale, opts);
    double t = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < t) throw ConfigError("time grid must be increasing and start at t >= 0");
        prop.advance(psi, t_grid[i] - t);
        t = t_grid[i];
        sample(i, psi);
    }
    if (stats) *stats = prop.stats();
}

CVec expm_dense_apply(const CMat& h, double scale, double t, const CVec& psi) {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const CVec c = es.eigenvectors().adjoint() * psi;
    CVec phased(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) phased[i] = std::exp(cplx(0.0, -scale * t * es.eigenvalues()[i])) * c[i];
    return es.eigenvectors() * phased;
}

}  // namespace polx
