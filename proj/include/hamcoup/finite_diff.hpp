// finite_diff.hpp — central-difference gradients and Jacobians.
//
// Step per coordinate: h_i = cbrt(eps) * max(1, |x_i|), the usual
// truncation/roundoff balance for second-order differences.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hamcoup/errors.hpp"
#include "hamcoup/layout.hpp"

namespace hamcoup {

inline double fd_step(double x) {
    static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    return h0 * std::max(1.0, std::abs(x));
}

inline Vec fd_gradient(const std::function<double(const Vec&)>& h, const Vec& x) {
    Vec g(x.size());
    Vec xp = x;
    for (Index i = 0; i < x.size(); ++i) {
        const double step = fd_step(x[i]);
        const double hi = x[i] + step;
        const double lo = x[i] - step;
        xp[i] = hi;
        const double hp = h(xp);
        xp[i] = lo;
        const double hm = h(xp);
        xp[i] = x[i];
        if (!std::isfinite(hp) || !std::isfinite(hm))
            throw NumericError("fd_gradient: non-finite evaluation near coordinate " +
                               std::to_string(i));
        g[i] = (hp - hm) / (hi - lo);  // actual spacing, not 2*step
    }
    return g;
}

// Jacobian of F: R^n -> R^m, one column per perturbed coordinate.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x,
                       Index out_dim) {
    Mat jac(out_dim, x.size());
    Vec xp = x;
    for (Index k = 0; k < x.size(); ++k) {
        const double step = fd_step(x[k]);
        const double hi = x[k] + step;
        const double lo = x[k] - step;
        xp[k] = hi;
        const Vec fp = f(xp);
        xp[k] = lo;
        const Vec fm = f(xp);
        xp[k] = x[k];
        if (fp.size() != out_dim || fm.size() != out_dim)
            throw LayoutError("fd_jacobian: evaluation returned " +
                              std::to_string(fp.size()) + " entries, expected " +
                              std::to_string(out_dim));
        if (!fp.allFinite() || !fm.allFinite())
            throw NumericError("fd_jacobian: non-finite evaluation near coordinate " +
                               std::to_string(k));
        jac.col(k) = (fp - fm) / (hi - lo);  // actual spacing, not 2*step
    }
    return jac;
}

} // namespace hamcoup
