// system.hpp — coupled canonical Hamiltonian systems with interaction terms.
//
// A CoupledSystem is two canonical subsystems plus interaction forces that
// enter the momentum equations:
//
//   q̇_a = δH/δp_a,   ṗ_a = -δH/δq_a + f_a        (a over both subsystems)
//
// Subsystem gradients are the *weighted* variational derivatives, i.e. the
// vectors the canonical equations consume: dH = Σ_a (δH/δq_a dq_a +
// δH/δp_a dp_a) w_a with the weights from the layout.  For unit weights they
// are ordinary partial derivatives.
#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hamcoup/errors.hpp"
#include "hamcoup/finite_diff.hpp"
#include "hamcoup/layout.hpp"

namespace hamcoup {

struct Subsystem {
    Index dim_q = 0;
    // Energy of this subsystem as a function of its own (q, p) blocks.
    std::function<double(const Vec& q, const Vec& p)> hamiltonian;
    // Weighted derivatives; when absent, central differences of the
    // hamiltonian (divided by the pair weights) are used instead.
    std::function<Vec(const Vec& q, const Vec& p)> grad_q;
    std::function<Vec(const Vec& q, const Vec& p)> grad_p;
    // True when H = T(p) + V(q); required by the Verlet splitting.
    bool separable = false;

    static Subsystem empty() {
        Subsystem s;
        s.dim_q = 0;
        s.hamiltonian = [](const Vec&, const Vec&) { return 0.0; };
        s.grad_q = [](const Vec&, const Vec&) { return Vec(0); };
        s.grad_p = [](const Vec&, const Vec&) { return Vec(0); };
        s.separable = true;
        return s;
    }
};

struct Interaction {
    // Forces on the p1 / p2 blocks as functions of the full state.
    // A null function means identically zero.
    std::function<Vec(const PhaseState&)> f1;
    std::function<Vec(const PhaseState&)> f2;
    // Optional analytic Jacobian: rows = stacked (f1, f2) components,
    // columns = all state coordinates.  Checkers fall back to central
    // differences when absent.
    std::function<Mat(const PhaseState&)> jacobian;
    std::string label;

    static Interaction zero() { return Interaction{}; }
    bool is_zero() const { return !f1 && !f2; }
};

struct CoupledSystem {
    CoordinateLayout layout;
    Subsystem sub1, sub2;
    Interaction interaction;
    // Conserved quantities defining the invariant manifold; each is expected
    // constant along exact flows.
    std::vector<std::function<double(const PhaseState&)>> constraints;

    CoupledSystem(CoordinateLayout lay, Subsystem s1, Subsystem s2,
                  Interaction inter = Interaction::zero(),
                  std::vector<std::function<double(const PhaseState&)>> cons = {})
        : layout(std::move(lay)), sub1(std::move(s1)), sub2(std::move(s2)),
          interaction(std::move(inter)), constraints(std::move(cons)) {
        if (sub1.dim_q != layout.dim_q1() || sub2.dim_q != layout.dim_q2())
            throw LayoutError("CoupledSystem: subsystem dimensions (" +
                              std::to_string(sub1.dim_q) + ", " +
                              std::to_string(sub2.dim_q) +
                              ") do not match layout blocks (" +
                              std::to_string(layout.dim_q1()) + ", " +
                              std::to_string(layout.dim_q2()) + ")");
        if (!sub1.hamiltonian || !sub2.hamiltonian)
            throw UsageError("CoupledSystem: both subsystems need a hamiltonian");
    }
};

namespace detail {

inline Vec weighted_grad(const std::function<Vec(const Vec&, const Vec&)>& analytic,
                         const std::function<double(const Vec&, const Vec&)>& ham,
                         const Vec& weights, const Vec& q, const Vec& p,
                         bool wrt_q) {
    if (analytic) {
        Vec g = analytic(q, p);
        if (g.size() != (wrt_q ? q.size() : p.size()))
            throw LayoutError("Subsystem gradient returned wrong length");
        return g;
    }
    Vec g = wrt_q
        ? fd_gradient([&](const Vec& qq) { return ham(qq, p); }, q)
        : fd_gradient([&](const Vec& pp) { return ham(q, pp); }, p);
    return g.cwiseQuotient(weights);
}

inline void check_state(const CoupledSystem& sys, const PhaseState& s,
                        const char* who) {
    if (!s.layout().same_shape(sys.layout))
        throw LayoutError(std::string(who) + ": state layout does not match system");
}

} // namespace detail

// Interaction force blocks, zero-filled when the interaction is absent.
inline Vec interaction_f1(const CoupledSystem& sys, const PhaseState& s) {
    if (!sys.interaction.f1) return Vec::Zero(sys.layout.dim_p1());
    Vec f = sys.interaction.f1(s);
    if (f.size() != sys.layout.dim_p1())
        throw LayoutError("interaction f1 returned " + std::to_string(f.size()) +
                          " entries, expected " + std::to_string(sys.layout.dim_p1()));
    return f;
}

inline Vec interaction_f2(const CoupledSystem& sys, const PhaseState& s) {
    if (!sys.interaction.f2) return Vec::Zero(sys.layout.dim_p2());
    Vec f = sys.interaction.f2(s);
    if (f.size() != sys.layout.dim_p2())
        throw LayoutError("interaction f2 returned " + std::to_string(f.size()) +
                          " entries, expected " + std::to_string(sys.layout.dim_p2()));
    return f;
}

// Weighted variational derivatives of one subsystem (1-based index for
// messages only).
inline Vec grad_q_sub1(const CoupledSystem& sys, const Vec& q, const Vec& p) {
    return detail::weighted_grad(sys.sub1.grad_q, sys.sub1.hamiltonian,
                                 sys.layout.weights1(), q, p, true);
}
inline Vec grad_p_sub1(const CoupledSystem& sys, const Vec& q, const Vec& p) {
    return detail::weighted_grad(sys.sub1.grad_p, sys.sub1.hamiltonian,
                                 sys.layout.weights1(), q, p, false);
}
inline Vec grad_q_sub2(const CoupledSystem& sys, const Vec& q, const Vec& p) {
    return detail::weighted_grad(sys.sub2.grad_q, sys.sub2.hamiltonian,
                                 sys.layout.weights2(), q, p, true);
}
inline Vec grad_p_sub2(const CoupledSystem& sys, const Vec& q, const Vec& p) {
    return detail::weighted_grad(sys.sub2.grad_p, sys.sub2.hamiltonian,
                                 sys.layout.weights2(), q, p, false);
}

// Right-hand side dz/dt = (q̇1, ṗ1, q̇2, ṗ2).
inline Vec eval_vector_field(const CoupledSystem& sys, const PhaseState& s) {
    detail::check_state(sys, s, "eval_vector_field");
    const CoordinateLayout& lay = sys.layout;
    const Vec q1 = s.q1(), p1 = s.p1(), q2 = s.q2(), p2 = s.p2();

    Vec dz(lay.total_dim());
    dz.segment(lay.q1_offset(), lay.dim_q1()) = grad_p_sub1(sys, q1, p1);
    dz.segment(lay.p1_offset(), lay.dim_p1()) =
        -grad_q_sub1(sys, q1, p1) + interaction_f1(sys, s);
    dz.segment(lay.q2_offset(), lay.dim_q2()) = grad_p_sub2(sys, q2, p2);
    dz.segment(lay.p2_offset(), lay.dim_p2()) =
        -grad_q_sub2(sys, q2, p2) + interaction_f2(sys, s);

    if (!dz.allFinite()) {
        const char* blocks[4] = {"q1-dot", "p1-dot", "q2-dot", "p2-dot"};
        const Index offs[4] = {lay.q1_offset(), lay.p1_offset(), lay.q2_offset(),
                               lay.p2_offset()};
        const Index lens[4] = {lay.dim_q1(), lay.dim_p1(), lay.dim_q2(),
                               lay.dim_p2()};
        for (int b = 0; b < 4; ++b)
            if (lens[b] > 0 && !dz.segment(offs[b], lens[b]).allFinite())
                throw NumericError(std::string("eval_vector_field: non-finite ") +
                                   blocks[b] + " block");
        throw NumericError("eval_vector_field: non-finite output");
    }
    return dz;
}

inline std::pair<double, double> subsystem_energies(const CoupledSystem& sys,
                                                    const PhaseState& s) {
    detail::check_state(sys, s, "subsystem_energies");
    const double h1 = sys.sub1.hamiltonian(s.q1(), s.p1());
    const double h2 = sys.sub2.hamiltonian(s.q2(), s.p2());
    if (!std::isfinite(h1) || !std::isfinite(h2))
        throw NumericError("subsystem_energies: non-finite energy");
    return {h1, h2};
}

// H1 + H2; the interaction carries no potential of its own.
inline double total_energy(const CoupledSystem& sys, const PhaseState& s) {
    const auto [h1, h2] = subsystem_energies(sys, s);
    return h1 + h2;
}

} // namespace hamcoup
