// integrators.hpp — one-step maps (Störmer–Verlet, implicit midpoint, RK4)
// and the integration driver.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamcoup/errors.hpp"
#include "hamcoup/layout.hpp"
#include "hamcoup/system.hpp"

namespace hamcoup {

enum class IntegratorKind { stormer_verlet, implicit_midpoint, rk4 };

inline const char* to_string(IntegratorKind kind) {
    switch (kind) {
        case IntegratorKind::stormer_verlet: return "stormer_verlet";
        case IntegratorKind::implicit_midpoint: return "implicit_midpoint";
        case IntegratorKind::rk4: return "rk4";
    }
    return "?";
}

inline IntegratorKind integrator_kind_from_string(const std::string& name) {
    if (name == "stormer_verlet" || name == "verlet")
        return IntegratorKind::stormer_verlet;
    if (name == "implicit_midpoint" || name == "midpoint")
        return IntegratorKind::implicit_midpoint;
    if (name == "rk4") return IntegratorKind::rk4;
    throw UsageError("unknown integrator '" + name +
                     "' (expected stormer_verlet, implicit_midpoint, or rk4)");
}

struct IntegratorSpec {
    IntegratorKind kind = IntegratorKind::stormer_verlet;
    double dt = 1e-2;
    double fixed_point_tol = 1e-12;  // midpoint solver
    int max_iterations = 50;

    void validate() const {
        if (!(dt > 0.0)) throw UsageError("IntegratorSpec: dt must be positive");
        if (!(fixed_point_tol > 0.0))
            throw UsageError("IntegratorSpec: fixed_point_tol must be positive");
        if (max_iterations < 1)
            throw UsageError("IntegratorSpec: max_iterations must be >= 1");
    }
};

namespace detail {

inline PhaseState assemble_state(const CoordinateLayout& lay, const Vec& q1,
                                 const Vec& p1, const Vec& q2, const Vec& p2,
                                 double t) {
    Vec z(lay.total_dim());
    z.segment(lay.q1_offset(), lay.dim_q1()) = q1;
    z.segment(lay.p1_offset(), lay.dim_p1()) = p1;
    z.segment(lay.q2_offset(), lay.dim_q2()) = q2;
    z.segment(lay.p2_offset(), lay.dim_p2()) = p2;
    return PhaseState(lay, std::move(z), t);
}

// Verlet needs a position-only interaction: perturb every momentum entry and
// require the forces to stay put.
inline void require_position_only_interaction(const CoupledSystem& sys,
                                              const PhaseState& s) {
    if (sys.interaction.is_zero()) return;
    const CoordinateLayout& lay = sys.layout;
    Vec base(lay.dim_p1() + lay.dim_p2());
    base.head(lay.dim_p1()) = interaction_f1(sys, s);
    base.tail(lay.dim_p2()) = interaction_f2(sys, s);
    const double scale = std::max(1.0, base.cwiseAbs().maxCoeff());

    auto probe = [&](Index col) {
        Vec z = s.z();
        z[col] += 1.0 + std::abs(z[col]);
        const PhaseState pert(lay, std::move(z), s.t());
        Vec f(lay.dim_p1() + lay.dim_p2());
        f.head(lay.dim_p1()) = interaction_f1(sys, pert);
        f.tail(lay.dim_p2()) = interaction_f2(sys, pert);
        if ((f - base).cwiseAbs().maxCoeff() > 1e-14 * scale)
            throw CapabilityError(
                "stormer_verlet: interaction depends on momentum coordinate z[" +
                std::to_string(col) + "]; use implicit_midpoint instead");
    };
    for (Index i = 0; i < lay.dim_p1(); ++i) probe(lay.p1_offset() + i);
    for (Index i = 0; i < lay.dim_p2(); ++i) probe(lay.p2_offset() + i);
}

inline void require_separable(const CoupledSystem& sys) {
    if (!sys.sub1.separable || !sys.sub2.separable)
        throw CapabilityError("stormer_verlet: both subsystems must be separable "
                              "(H = T(p) + V(q)); use implicit_midpoint instead");
}

} // namespace detail

// Kick-drift-kick Störmer–Verlet with probing done once at construction.
// Interaction forces are part of the kick, re-evaluated at current positions.
class VerletStepper {
public:
    VerletStepper(const CoupledSystem& sys, const PhaseState& probe_state)
        : sys_(sys) {
        detail::require_separable(sys);
        detail::require_position_only_interaction(sys, probe_state);
    }

    PhaseState step(const PhaseState& s, double dt) const {
        const CoordinateLayout& lay = sys_.layout;
        Vec q1 = s.q1(), p1 = s.p1(), q2 = s.q2(), p2 = s.p2();

        p1 += 0.5 * dt * (-grad_q_sub1(sys_, q1, p1) + interaction_f1(sys_, s));
        p2 += 0.5 * dt * (-grad_q_sub2(sys_, q2, p2) + interaction_f2(sys_, s));

        q1 += dt * grad_p_sub1(sys_, q1, p1);
        q2 += dt * grad_p_sub2(sys_, q2, p2);

        const PhaseState moved =
            detail::assemble_state(lay, q1, p1, q2, p2, s.t());
        p1 += 0.5 * dt *
              (-grad_q_sub1(sys_, q1, p1) + interaction_f1(sys_, moved));
        p2 += 0.5 * dt *
              (-grad_q_sub2(sys_, q2, p2) + interaction_f2(sys_, moved));

        return detail::assemble_state(lay, q1, p1, q2, p2, s.t() + dt);
    }

private:
    const CoupledSystem& sys_;
};

inline PhaseState stormer_verlet_step(const CoupledSystem& sys,
                                      const PhaseState& s, double dt) {
    return VerletStepper(sys, s).step(s, dt);
}

// Solves z' = z + dt X((z + z')/2) by fixed-point iteration; symplectic for
// any canonical system under the layout's weighted form.
inline PhaseState implicit_midpoint_step(const CoupledSystem& sys,
                                         const PhaseState& s, double dt,
                                         const IntegratorSpec& spec) {
    const Vec& z = s.z();
    Vec y = z + dt * eval_vector_field(sys, s);  // explicit predictor
    double change = 0.0;
    for (int it = 0; it < spec.max_iterations; ++it) {
        const PhaseState mid(s.layout(), 0.5 * (z + y), s.t() + 0.5 * dt);
        Vec y_next = z + dt * eval_vector_field(sys, mid);
        change = (y_next - y).cwiseAbs().maxCoeff();
        y.swap(y_next);
        if (change <= spec.fixed_point_tol)
            return PhaseState(s.layout(), std::move(y), s.t() + dt);
    }
    throw ConvergenceError("implicit_midpoint_step: fixed point not reached in " +
                               std::to_string(spec.max_iterations) +
                               " iterations (last change " +
                               std::to_string(change) + ")",
                           change);
}

// Classical four-stage explicit Runge–Kutta.
inline PhaseState rk4_step(const CoupledSystem& sys, const PhaseState& s,
                           double dt) {
    const Vec& z = s.z();
    const double t = s.t();
    const CoordinateLayout& lay = s.layout();
    const Vec k1 = eval_vector_field(sys, s);
    const Vec k2 =
        eval_vector_field(sys, PhaseState(lay, z + 0.5 * dt * k1, t + 0.5 * dt));
    const Vec k3 =
        eval_vector_field(sys, PhaseState(lay, z + 0.5 * dt * k2, t + 0.5 * dt));
    const Vec k4 = eval_vector_field(sys, PhaseState(lay, z + dt * k3, t + dt));
    return PhaseState(lay, z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
                      t + dt);
}

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;
    std::vector<std::array<double, 3>> energies;  // H1, H2, H_total
    std::vector<Vec> constraint_residuals;        // one entry per constraint
    // Running maxima over *every* step (snapshots alias fast oscillations):
    double max_abs_dh_total = 0.0;
    double max_abs_dh1 = 0.0;
    double max_abs_dh2 = 0.0;
    Vec max_abs_constraint;  // per constraint

    std::size_t size() const { return times.size(); }
};

// Applies the chosen one-step map n_steps times from s0, recording every
// `stride` steps (initial and final states are always recorded).  Times are
// accumulated as t0 + n*dt.
inline Trajectory integrate(const CoupledSystem& sys, const IntegratorSpec& spec,
                            const PhaseState& s0, long n_steps, long stride) {
    spec.validate();
    if (n_steps < 1) throw UsageError("integrate: n_steps must be >= 1");
    if (stride < 1) throw UsageError("integrate: stride must be >= 1");
    detail::check_state(sys, s0, "integrate");

    std::optional<VerletStepper> verlet;
    if (spec.kind == IntegratorKind::stormer_verlet) verlet.emplace(sys, s0);

    auto advance = [&](const PhaseState& s) -> PhaseState {
        switch (spec.kind) {
            case IntegratorKind::stormer_verlet: return verlet->step(s, spec.dt);
            case IntegratorKind::implicit_midpoint:
                return implicit_midpoint_step(sys, s, spec.dt, spec);
            case IntegratorKind::rk4: return rk4_step(sys, s, spec.dt);
        }
        throw UsageError("integrate: unknown integrator kind");
    };

    const Index n_cons = static_cast<Index>(sys.constraints.size());
    Trajectory traj;
    traj.max_abs_constraint = Vec::Zero(n_cons);

    const auto [h1_0, h2_0] = subsystem_energies(sys, s0);
    auto record = [&](const PhaseState& s, double h1, double h2) {
        traj.times.push_back(s.t());
        traj.states.push_back(s);
        traj.energies.push_back({h1, h2, h1 + h2});
        traj.constraint_residuals.push_back(constraint_values(sys, s));
    };
    record(s0, h1_0, h2_0);

    PhaseState s = s0;
    const double t0 = s0.t();
    for (long n = 1; n <= n_steps; ++n) {
        try {
            s = advance(s);
            s = s.with_z(s.z(), t0 + static_cast<double>(n) * spec.dt);

            const auto [h1, h2] = subsystem_energies(sys, s);
            traj.max_abs_dh_total = std::max(
                traj.max_abs_dh_total, std::abs((h1 + h2) - (h1_0 + h2_0)));
            traj.max_abs_dh1 = std::max(traj.max_abs_dh1, std::abs(h1 - h1_0));
            traj.max_abs_dh2 = std::max(traj.max_abs_dh2, std::abs(h2 - h2_0));
            if (n_cons > 0) {
                const Vec g = constraint_values(sys, s);
                traj.max_abs_constraint =
                    traj.max_abs_constraint.cwiseMax(g.cwiseAbs());
            }
            if (n % stride == 0 || n == n_steps) record(s, h1, h2);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("integrate: step " + std::to_string(n) + ": " +
                                       e.what(),
                                   e.last_residual);
        } catch (const NumericError& e) {
            throw NumericError("integrate: step " + std::to_string(n) + ": " +
                               e.what());
        }
    }
    return traj;
}

inline OneStepMap make_one_step_map(const CoupledSystem& sys,
                                    const IntegratorSpec& spec) {
    switch (spec.kind) {
        case IntegratorKind::stormer_verlet:
            return [&sys](const PhaseState& s, double dt) {
                return stormer_verlet_step(sys, s, dt);
            };
        case IntegratorKind::implicit_midpoint:
            return [&sys, spec](const PhaseState& s, double dt) {
                return implicit_midpoint_step(sys, s, dt, spec);
            };
        case IntegratorKind::rk4:
            return [&sys](const PhaseState& s, double dt) {
                return rk4_step(sys, s, dt);
            };
    }
    throw UsageError("make_one_step_map: unknown integrator kind");
}

} // namespace hamcoup
