// Shared test utilities: seeded randomness and independent oracles.
#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hamcoup/hamcoup.hpp"

namespace test_util {

using hamcoup::CoordinateLayout;
using hamcoup::Index;
using hamcoup::Mat;
using hamcoup::PhaseState;
using hamcoup::Vec;

inline Vec random_vec(std::mt19937_64& rng, Index n, double lo = -1.0,
                      double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

inline PhaseState random_state(std::mt19937_64& rng, const CoordinateLayout& lay,
                               double half_width = 1.0) {
    return PhaseState(lay, random_vec(rng, lay.total_dim(), -half_width,
                                      half_width));
}

// Independent fourth-difference oracle: pad the interior values with the
// simply supported ghosts (u_0 = u_N = 0, odd reflection outside) and apply
// the (1, -4, 6, -4, 1) stencil to the padded array.
inline Vec delta4_oracle(const Vec& u, double dx) {
    const Index n = u.size();
    Vec ext = Vec::Zero(n + 4);  // ext[g + 1] holds grid value u_g, g = -1..n+2
    for (Index g = 1; g <= n; ++g) ext[g + 1] = u[g - 1];
    ext[0] = -u[0];          // u_{-1} = -u_1
    ext[n + 3] = -u[n - 1];  // u_{N+1} = -u_{N-1}
    const double dx4 = dx * dx * dx * dx;
    Vec out(n);
    for (Index i = 1; i <= n; ++i)
        out[i - 1] = (ext[i + 3] - 4.0 * ext[i + 2] + 6.0 * ext[i + 1] -
                      4.0 * ext[i] + ext[i - 1]) /
                     dx4;
    return out;
}

// Degree-4 Taylor polynomial of exp(dt A) applied to z.
inline Vec taylor4_exp(const Mat& a, double dt, const Vec& z) {
    Vec acc = z;
    Vec term = z;
    for (int k = 1; k <= 4; ++k) {
        term = (dt / static_cast<double>(k)) * (a * term);
        acc += term;
    }
    return acc;
}

inline double max_rel_diff(const Vec& a, const Vec& b) {
    return (a - b).cwiseAbs().maxCoeff() /
           std::max(1.0, a.cwiseAbs().maxCoeff());
}

} // namespace test_util
