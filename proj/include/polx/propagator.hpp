#pragma once
// Short-time Lanczos propagation of psi' = -i scale H psi.

#include "polx/spinspace.hpp"

#include <functional>
#include <vector>

namespace polx {

struct KrylovOptions {
    int max_dim = 40;      ///< largest Krylov space per step
    double tol = 1e-12;    ///< a-posteriori error allowed per unit time (floored at 1e-15 per step)
};

struct PropagationStats {
    std::size_t steps = 0;
    std::size_t matvecs = 0;
    double error_bound = 0.0;  ///< sum of per-step error estimates
};

class LanczosPropagator {
public:
    /// `scale` multiplies H in the generator (1/sqrt(N_a N_b) for rescaled time).
    LanczosPropagator(const SpMat& h, double scale, KrylovOptions opts = {});

    /// Advances psi by dt in place, subdividing as the error estimate requires.
    /// Throws NumericalError if the step size collapses.
    void advance(CVec& psi, double dt);

    const PropagationStats& stats() const { return stats_; }

private:
    const SpMat& h_;
    double scale_;
    KrylovOptions opts_;
    PropagationStats stats_;
};

/// Calls `sample(i, psi)` for every time of t_grid (t_grid[0] must be 0 or
/// positive and increasing). psi starts at t = 0.
void propagate_on_grid(const SpMat& h, double scale, CVec psi, const std::vector<double>& t_grid, KrylovOptions opts,
                       const std::function<void(std::size_t, const CVec&)>& sample, PropagationStats* stats = nullptr);

/// exp(-i scale t H) psi from a dense Hermitian eigendecomposition (test oracle).
CVec expm_dense_apply(const CMat& h, double scale, double t, const CVec& psi);

}  // namespace polx
