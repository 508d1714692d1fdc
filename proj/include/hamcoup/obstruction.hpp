// obstruction.hpp — numerical symplecticity checks for coupled systems.
//
// The flow of a coupled system changes the weighted canonical form at the
// rate  Ω = Σ_a w_a df_a ∧ dq_a  (one term per interaction component paired
// with its q-coordinate).  The system preserves the form exactly when Ω
// vanishes; the checks below evaluate Ω pointwise on sampled states, either
// on the whole phase space or restricted to the tangent space of the
// constraint manifold.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hamcoup/finite_diff.hpp"
#include "hamcoup/layout.hpp"
#include "hamcoup/system.hpp"

namespace hamcoup {

struct ObstructionForm {
    PhaseState at_state;
    Mat omega;       // coefficients of Ω in the basis dz_k ∧ dz_l, k < l
    double max_abs;  // largest |coefficient|
};

struct SymplecticVerdict {
    bool symplectic = false;
    double residual = 0.0;  // max |Ω| over the sampled states
    Index samples = 0;
    double tolerance = 0.0;
    bool constrained = false;
};

// Stacked interaction evaluated as a plain vector function of z (time held
// fixed); rows f1 first, then f2.
inline Vec stacked_interaction(const CoupledSystem& sys, const PhaseState& s) {
    Vec out(sys.layout.dim_p1() + sys.layout.dim_p2());
    out.head(sys.layout.dim_p1()) = interaction_f1(sys, s);
    out.tail(sys.layout.dim_p2()) = interaction_f2(sys, s);
    return out;
}

// Central-difference Jacobian of the stacked interaction: row a, column k
// is ∂f_a/∂z_k.
inline Mat interaction_jacobian(const CoupledSystem& sys, const PhaseState& s) {
    detail::check_state(sys, s, "interaction_jacobian");
    const Index rows = sys.layout.dim_p1() + sys.layout.dim_p2();
    if (sys.interaction.is_zero()) return Mat::Zero(rows, sys.layout.total_dim());
    return fd_jacobian(
        [&](const Vec& z) {
            return stacked_interaction(sys, PhaseState(sys.layout, z, s.t()));
        },
        s.z(), rows);
}

namespace detail {

inline Mat interaction_jacobian_or_analytic(const CoupledSystem& sys,
                                            const PhaseState& s) {
    if (sys.interaction.jacobian) {
        Mat jac = sys.interaction.jacobian(s);
        const Index rows = sys.layout.dim_p1() + sys.layout.dim_p2();
        if (jac.rows() != rows || jac.cols() != sys.layout.total_dim())
            throw LayoutError("interaction jacobian has shape " +
                              std::to_string(jac.rows()) + "x" +
                              std::to_string(jac.cols()) + ", expected " +
                              std::to_string(rows) + "x" +
                              std::to_string(sys.layout.total_dim()));
        return jac;
    }
    return interaction_jacobian(sys, s);
}

} // namespace detail

// Coefficient matrix of Ω = Σ_a w_a df_a ∧ dq_a at one state.  Interaction
// component a pairs with the q-coordinate of the same canonical pair, so
//   omega(k, l) = Σ_a w_a (J(a,k) δ[l = col_q(a)] - J(a,l) δ[k = col_q(a)]),
// antisymmetric by construction.
inline ObstructionForm obstruction_form(const CoupledSystem& sys,
                                        const PhaseState& s) {
    const CoordinateLayout& lay = sys.layout;
    const Mat jac = detail::interaction_jacobian_or_analytic(sys, s);
    Mat omega = Mat::Zero(lay.total_dim(), lay.total_dim());
    for (Index a = 0; a < lay.n_pairs(); ++a) {
        const Index cq = lay.col_q(a);
        const double w = lay.weight(a);
        for (Index k = 0; k < lay.total_dim(); ++k) {
            const double coeff = w * jac(a, k);
            if (coeff == 0.0) continue;
            omega(k, cq) += coeff;
            omega(cq, k) -= coeff;
        }
    }
    const double max_abs =
        lay.total_dim() > 0 ? omega.cwiseAbs().maxCoeff() : 0.0;
    return ObstructionForm{s, std::move(omega), max_abs};
}

inline SymplecticVerdict check_symplectic(const CoupledSystem& sys,
                                          const std::vector<PhaseState>& states,
                                          double tol) {
    if (states.empty())
        throw UsageError("check_symplectic: empty sample set");
    if (!(tol > 0.0))
        throw UsageError("check_symplectic: tolerance must be positive");
    double residual = 0.0;
    for (const PhaseState& s : states)
        residual = std::max(residual, obstruction_form(sys, s).max_abs);
    return SymplecticVerdict{residual <= tol, residual,
                             static_cast<Index>(states.size()), tol, false};
}

// Values of all registered constraints at a state.
inline Vec constraint_values(const CoupledSystem& sys, const PhaseState& s) {
    Vec g(static_cast<Index>(sys.constraints.size()));
    for (Index i = 0; i < g.size(); ++i) {
        g[i] = sys.constraints[static_cast<std::size_t>(i)](s);
        if (!std::isfinite(g[i]))
            throw NumericError("constraint " + std::to_string(i) +
                               " evaluated non-finite");
    }
    return g;
}

inline Mat constraint_jacobian(const CoupledSystem& sys, const PhaseState& s) {
    return fd_jacobian(
        [&](const Vec& z) {
            return constraint_values(sys, PhaseState(sys.layout, z, s.t()));
        },
        s.z(), static_cast<Index>(sys.constraints.size()));
}

// Minimal-norm Newton projection onto the constraint set g(z) = 0.
// Returns the projected state; throws ConvergenceError if the residual does
// not drop below the target.
inline PhaseState project_to_constraints(const CoupledSystem& sys,
                                         const PhaseState& s, double target,
                                         int max_newton = 20) {
    PhaseState cur = s;
    for (int it = 0; it < max_newton; ++it) {
        const Vec g = constraint_values(sys, cur);
        if (g.size() == 0 || g.cwiseAbs().maxCoeff() <= target) return cur;
        const Mat jac = constraint_jacobian(sys, cur);
        // least-norm Newton update z <- z - G⁺ g; the rank-revealing solve
        // also covers dependent constraint rows
        const Vec update = Eigen::CompleteOrthogonalDecomposition<Mat>(jac).solve(g);
        cur = cur.with_z(cur.z() - update, cur.t());
    }
    const double res = constraint_values(sys, cur).cwiseAbs().maxCoeff();
    if (res <= target) return cur;
    throw ConvergenceError("project_to_constraints: residual " +
                               std::to_string(res) + " above target " +
                               std::to_string(target),
                           res);
}

// Orthonormal basis of the null space of G via a rank-revealing QR of Gᵀ.
inline Mat null_space_basis(const Mat& constraint_jac) {
    const Index n = constraint_jac.cols();
    Eigen::ColPivHouseholderQR<Mat> qr(constraint_jac.transpose());
    const Index rank = qr.rank();
    Mat q = qr.householderQ();
    return q.rightCols(n - rank);
}

// Symplecticity restricted to the invariant manifold: sample states are
// projected onto the constraint set, then Ω is evaluated on an orthonormal
// tangent basis only.
inline SymplecticVerdict check_symplectic_on_manifold(
    const CoupledSystem& sys, const std::vector<PhaseState>& states,
    double tol) {
    if (sys.constraints.empty())
        throw UsageError("check_symplectic_on_manifold: system has no constraints");
    if (states.empty())
        throw UsageError("check_symplectic_on_manifold: empty sample set");
    if (!(tol > 0.0))
        throw UsageError("check_symplectic_on_manifold: tolerance must be positive");

    double residual = 0.0;
    Index used = 0;
    for (const PhaseState& raw : states) {
        PhaseState s = raw;
        try {
            s = project_to_constraints(sys, raw, tol / 10.0);
        } catch (const ConvergenceError&) {
            continue;  // reject samples the projection cannot reach
        }
        const ObstructionForm form = obstruction_form(sys, s);
        const Mat basis = null_space_basis(constraint_jacobian(sys, s));
        if (basis.cols() > 0) {
            const Mat restricted = basis.transpose() * form.omega * basis;
            residual = std::max(residual, restricted.cwiseAbs().maxCoeff());
        }
        ++used;
    }
    if (used == 0)
        throw UsageError("check_symplectic_on_manifold: no sample could be "
                         "projected onto the constraint set");
    return SymplecticVerdict{residual <= tol, residual, used, tol, true};
}

// One-step maps advance a state by dt.
using OneStepMap = std::function<PhaseState(const PhaseState&, double dt)>;

// Max-norm of DΦᵀ W DΦ - W, the discrete form-preservation defect of a
// one-step map at a state (DΦ by central differences).
inline double map_pullback_residual(const OneStepMap& step, const PhaseState& s,
                                    double dt) {
    if (!(dt > 0.0))
        throw UsageError("map_pullback_residual: dt must be positive");
    const Mat dphi = fd_jacobian(
        [&](const Vec& z) {
            return step(PhaseState(s.layout(), z, s.t()), dt).z();
        },
        s.z(), s.layout().total_dim());
    const Mat w = s.layout().symplectic_form();
    return (dphi.transpose() * w * dphi - w).cwiseAbs().maxCoeff();
}

} // namespace hamcoup
