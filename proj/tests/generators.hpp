#pragma once
// Seeded random inputs for property tests.

#include "polx/spinspace.hpp"

#include <cmath>
#include <random>

namespace polx::testing {

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed'2024);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline CVec random_vector(Eigen::Index dim) {
    std::normal_distribution<double> n;
    CVec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = cplx(n(rng()), n(rng()));
    return v.normalized();
}

inline QuantumState random_state(int na, int nb) {
    return QuantumState(BeamSize(na), BeamSize(nb), random_vector((na + 1) * (nb + 1)));
}

}  // namespace polx::testing
