// models.hpp — concrete systems: harmonic oscillators, the two-mass spring
// chain, the semi-discretized simply supported Euler–Bernoulli beam, and the
// beam–spring composition with its energy-derived point coupling.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hamcoup/errors.hpp"
#include "hamcoup/layout.hpp"
#include "hamcoup/system.hpp"

namespace hamcoup {

// ---------------------------------------------------------------------------
// Fourth-difference operator on interior beam values
// ---------------------------------------------------------------------------
//
// u holds the interior nodes u_1..u_{N_x-1}; the simply supported closure
// supplies the ghosts:  u_0 = u_{N_x} = 0 (pinned ends) and the odd
// reflections u_{-1} = -u_1, u_{N_x+1} = -u_{N_x-1} from the discrete
// zero-curvature condition (u_{-1} - 2u_0 + u_1)/Δx² = 0.

namespace detail {

// Value at grid index i (1-based interior; ghosts resolved).
inline double beam_value(const Vec& u, Index i) {
    const Index n = u.size();
    if (i >= 1 && i <= n) return u[i - 1];
    if (i == 0 || i == n + 1) return 0.0;
    if (i == -1) return -u[0];
    if (i == n + 2) return -u[n - 1];
    throw LayoutError("beam_value: grid index " + std::to_string(i) +
                      " outside the closed stencil range");
}

// Row of the fourth-difference operator at interior node i, as a dense
// vector of ∂(δ₄u_i)/∂u_j (ghost contributions folded in).
inline Vec delta4_row(Index n, Index i, double dx) {
    static const double coeff[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    Vec row = Vec::Zero(n);
    const double dx4 = dx * dx * dx * dx;
    for (int o = -2; o <= 2; ++o) {
        const Index idx = i + o;
        const double c = coeff[o + 2] / dx4;
        if (idx >= 1 && idx <= n)
            row[idx - 1] += c;
        else if (idx == -1)
            row[0] -= c;
        else if (idx == n + 2)
            row[n - 1] -= c;
        // idx 0 and n+1 are pinned to zero
    }
    return row;
}

} // namespace detail

// Fourth difference at a single interior node (1-based index).
inline double delta4_at(const Vec& u, double dx, Index i) {
    if (u.size() < 1) throw LayoutError("delta4_at: empty beam vector");
    if (i < 1 || i > u.size())
        throw LayoutError("delta4_at: node " + std::to_string(i) +
                          " outside 1.." + std::to_string(u.size()));
    const double dx4 = dx * dx * dx * dx;
    return (detail::beam_value(u, i + 2) - 4.0 * detail::beam_value(u, i + 1) +
            6.0 * detail::beam_value(u, i) - 4.0 * detail::beam_value(u, i - 1) +
            detail::beam_value(u, i - 2)) /
           dx4;
}

// δ₄ applied to every interior node.
inline Vec apply_delta4(const Vec& u, double dx) {
    if (u.size() < 1) throw LayoutError("apply_delta4: empty beam vector");
    if (!(dx > 0.0)) throw LayoutError("apply_delta4: dx must be positive");
    Vec out(u.size());
    for (Index i = 1; i <= u.size(); ++i) out[i - 1] = delta4_at(u, dx, i);
    return out;
}

// ---------------------------------------------------------------------------
// Parameter sets
// ---------------------------------------------------------------------------

struct SpringMassParams {
    double m1 = 0.1, m2 = 0.1;  // masses
    double k = 0.5;             // spring stiffness

    void validate() const {
        if (!(m1 > 0.0) || !(m2 > 0.0) || !(k > 0.0))
            throw UsageError("SpringMassParams: m1, m2, k must be positive");
    }
};

struct BeamParams {
    double rho = 10.0;     // density
    double area = 1.0;     // cross-section A
    double modulus = 1.0;  // E
    double inertia = 1.0;  // second moment I
    double length = 1.0;   // L
    // Grid *intervals* (51 grid points); interior unknowns are 1..n_x-1 and
    // dx = L/n_x = 0.02 at the defaults, matching b = n_b dx = 0.2.
    Index n_x = 50;

    double dx() const { return length / static_cast<double>(n_x); }
    Index n_interior() const { return n_x - 1; }

    void validate() const {
        if (!(rho > 0.0) || !(area > 0.0) || !(modulus > 0.0) ||
            !(inertia > 0.0) || !(length > 0.0))
            throw UsageError("BeamParams: physical parameters must be positive");
        if (n_x < 4) throw UsageError("BeamParams: n_x must be at least 4");
    }
};

struct CouplingSpec {
    Index n_b = 10;  // coupling grid index
    double b = std::numeric_limits<double>::quiet_NaN();  // abscissa, informational

    void validate(const BeamParams& beam) const {
        if (n_b < 1 || n_b > beam.n_x - 1)
            throw UsageError("CouplingSpec: n_b must lie in 1..n_x-1");
    }
    // True when b was given and matches the grid index to within one cell.
    bool consistent(const BeamParams& beam) const {
        if (std::isnan(b)) return true;
        return std::abs(static_cast<double>(n_b) * beam.dx() - b) < beam.dx();
    }
};

struct OscillatorParams {
    double mass = 1.0, stiffness = 1.0;

    void validate() const {
        if (!(mass > 0.0) || !(stiffness > 0.0))
            throw UsageError("OscillatorParams: mass and stiffness must be positive");
    }
};

// ---------------------------------------------------------------------------
// Subsystem builders
// ---------------------------------------------------------------------------

inline Subsystem build_harmonic(const OscillatorParams& p = {}) {
    p.validate();
    Subsystem s;
    s.dim_q = 1;
    s.hamiltonian = [p](const Vec& q, const Vec& p_) {
        return 0.5 * p_[0] * p_[0] / p.mass + 0.5 * p.stiffness * q[0] * q[0];
    };
    s.grad_q = [p](const Vec& q, const Vec&) {
        return Vec::Constant(1, p.stiffness * q[0]);
    };
    s.grad_p = [p](const Vec&, const Vec& p_) {
        return Vec::Constant(1, p_[0] / p.mass);
    };
    s.separable = true;
    return s;
}

// Two masses joined by one spring: H = p1²/2m1 + p2²/2m2 + k/2 (q2 - q1)².
inline Subsystem build_spring_mass(const SpringMassParams& p) {
    p.validate();
    Subsystem s;
    s.dim_q = 2;
    s.hamiltonian = [p](const Vec& q, const Vec& mom) {
        const double stretch = q[1] - q[0];
        return 0.5 * mom[0] * mom[0] / p.m1 + 0.5 * mom[1] * mom[1] / p.m2 +
               0.5 * p.k * stretch * stretch;
    };
    s.grad_q = [p](const Vec& q, const Vec&) {
        const double stretch = q[1] - q[0];
        Vec g(2);
        g << -p.k * stretch, p.k * stretch;
        return g;
    };
    s.grad_p = [p](const Vec&, const Vec& mom) {
        Vec g(2);
        g << mom[0] / p.m1, mom[1] / p.m2;
        return g;
    };
    s.separable = true;
    return s;
}

// Semi-discretized simply supported beam over (u_i, v_i), i = 1..n_x-1,
// with v the momentum density:
//   H = Σ_i ½ (v_i²/ρA + EI ((u_{i+1} - 2u_i + u_{i-1})/Δx²)²) Δx.
// Weighted derivatives (weights Δx live in the layout): δH/δu = EI δ₄u and
// δH/δv = v/ρA, the summation-by-parts identity under the ghost closure.
inline Subsystem build_beam(const BeamParams& p) {
    p.validate();
    const Index n = p.n_interior();
    const double dx = p.dx();
    const double ei = p.modulus * p.inertia;
    const double rho_a = p.rho * p.area;

    Subsystem s;
    s.dim_q = n;
    s.hamiltonian = [n, dx, ei, rho_a](const Vec& u, const Vec& v) {
        if (u.size() != n || v.size() != n)
            throw LayoutError("beam hamiltonian: expected " + std::to_string(n) +
                              " interior values");
        const double dx2 = dx * dx;
        double h = 0.0;
        for (Index i = 1; i <= n; ++i) {
            const double curv = (detail::beam_value(u, i + 1) - 2.0 * u[i - 1] +
                                 detail::beam_value(u, i - 1)) /
                                dx2;
            h += 0.5 * (v[i - 1] * v[i - 1] / rho_a + ei * curv * curv) * dx;
        }
        return h;
    };
    s.grad_q = [n, dx, ei](const Vec& u, const Vec&) -> Vec {
        if (u.size() != n)
            throw LayoutError("beam grad_q: expected " + std::to_string(n) +
                              " interior values");
        return ei * apply_delta4(u, dx);
    };
    s.grad_p = [n, rho_a](const Vec&, const Vec& v) -> Vec {
        if (v.size() != n)
            throw LayoutError("beam grad_p: expected " + std::to_string(n) +
                              " interior values");
        return v / rho_a;
    };
    s.separable = true;
    return s;
}

// ---------------------------------------------------------------------------
// Beam–spring coupling
// ---------------------------------------------------------------------------

// Magnitude f of the point interaction tying u_{n_b} to q1.  Defined by the
// equal-acceleration requirement
//   (1/ρA)(-EI δ₄u_{n_b} + f/Δx) - (1/m1)(k(q2 - q1) - f) = 0,
// which solves to
//   f = μ [ (EI/ρA) δ₄u_{n_b} + (k/m1)(q2 - q1) ],
//   μ = ρA Δx m1 / (ρA Δx + m1).
// The beam receives F_i = f/Δx at i = n_b, the first mass receives -f.
inline double coupling_force(const Vec& u, double q1, double q2,
                             const BeamParams& beam, const SpringMassParams& sp,
                             const CouplingSpec& c) {
    const double dx = beam.dx();
    const double rho_a = beam.rho * beam.area;
    const double ei = beam.modulus * beam.inertia;
    const double mu = rho_a * dx * sp.m1 / (rho_a * dx + sp.m1);
    return mu * ((ei / rho_a) * delta4_at(u, dx, c.n_b) +
                 (sp.k / sp.m1) * (q2 - q1));
}

// Fully assembled coupled system.  Constraint offsets c1, c2 fix the level
// set u_{n_b} - q1 = c1, v_{n_b}/ρA - p1/m1 = c2 (zero for the standard
// initial states).
inline CoupledSystem build_coupled_beam_spring(const BeamParams& beam,
                                               const SpringMassParams& sp,
                                               const CouplingSpec& c,
                                               double c1 = 0.0, double c2 = 0.0) {
    beam.validate();
    sp.validate();
    c.validate(beam);

    const Index n = beam.n_interior();
    const double dx = beam.dx();
    const double rho_a = beam.rho * beam.area;
    const double ei = beam.modulus * beam.inertia;
    const double mu = rho_a * dx * sp.m1 / (rho_a * dx + sp.m1);

    Vec weights(n + 2);
    weights.head(n).setConstant(dx);
    weights.tail(2).setOnes();
    CoordinateLayout layout(n, 2, std::move(weights));

    auto force = [beam, sp, c](const PhaseState& s) {
        const Vec u = s.q1();
        const Vec qm = s.q2();
        return coupling_force(u, qm[0], qm[1], beam, sp, c);
    };

    Interaction inter;
    inter.label = "beam_spring_point_coupling";
    inter.f1 = [force, n, dx, c](const PhaseState& s) {
        Vec f = Vec::Zero(n);
        f[c.n_b - 1] = force(s) / dx;
        return f;
    };
    inter.f2 = [force](const PhaseState& s) {
        Vec f(2);
        f << -force(s), 0.0;
        return f;
    };

    // The coupling force is linear in the state, so its Jacobian is constant:
    // df = μ (EI/ρA) Σ_j (δ₄ row)_j du_j + μ (k/m1)(dq2 - dq1).
    const Vec df_du = mu * (ei / rho_a) * detail::delta4_row(n, c.n_b, dx);
    const double df_dq = mu * sp.k / sp.m1;
    const Index q1_col = 2 * n;      // first mass coordinate
    const Index q2_col = 2 * n + 1;  // second mass coordinate
    inter.jacobian = [df_du, df_dq, n, dx, c, q1_col, q2_col](const PhaseState& s) {
        Mat jac = Mat::Zero(n + 2, s.layout().total_dim());
        Vec df = Vec::Zero(s.layout().total_dim());
        df.head(n) = df_du;
        df[q1_col] = -df_dq;
        df[q2_col] = df_dq;
        jac.row(c.n_b - 1) = df / dx;  // beam row: F_{n_b} = f/Δx
        jac.row(n) = -df;              // first mass row: -f
        return jac;
    };

    const Index u_nb = c.n_b - 1;
    const Index v_nb = n + c.n_b - 1;
    const Index p1_col = 2 * n + 2;
    std::vector<std::function<double(const PhaseState&)>> constraints;
    constraints.emplace_back([u_nb, q1_col, c1](const PhaseState& s) {
        return s.z()[u_nb] - s.z()[q1_col] - c1;
    });
    constraints.emplace_back([v_nb, p1_col, rho_a, sp, c2](const PhaseState& s) {
        return s.z()[v_nb] / rho_a - s.z()[p1_col] / sp.m1 - c2;
    });

    return CoupledSystem(std::move(layout), build_beam(beam),
                         build_spring_mass(sp), std::move(inter),
                         std::move(constraints));
}

// Same system with the constraint offsets read off a reference state, so its
// level set becomes the invariant manifold.
inline CoupledSystem build_coupled_beam_spring(const BeamParams& beam,
                                               const SpringMassParams& sp,
                                               const CouplingSpec& c,
                                               const PhaseState& reference) {
    const Index n = beam.n_interior();
    const Vec& z = reference.z();
    if (z.size() != 2 * n + 4)
        throw LayoutError("build_coupled_beam_spring: reference state has " +
                          std::to_string(z.size()) + " entries, expected " +
                          std::to_string(2 * n + 4));
    const double c1 = z[c.n_b - 1] - z[2 * n];
    const double c2 = z[n + c.n_b - 1] / (beam.rho * beam.area) -
                      z[2 * n + 2] / sp.m1;
    return build_coupled_beam_spring(beam, sp, c, c1, c2);
}

// Rest state except the free mass: u = v = 0, q1 = p1 = p2 = 0, q2 = q2_0.
// Satisfies both coupling conditions with zero offsets.
inline PhaseState beam_spring_initial_state(const BeamParams& beam,
                                            const SpringMassParams& sp,
                                            const CouplingSpec& c,
                                            double q2_0) {
    beam.validate();
    sp.validate();
    c.validate(beam);
    const Index n = beam.n_interior();
    Vec weights(n + 2);
    weights.head(n).setConstant(beam.dx());
    weights.tail(2).setOnes();
    CoordinateLayout layout(n, 2, std::move(weights));
    Vec z = Vec::Zero(layout.total_dim());
    z[layout.q2_offset() + 1] = q2_0;
    return PhaseState(std::move(layout), std::move(z), 0.0);
}

// ---------------------------------------------------------------------------
// Small composed systems used by checks and tests
// ---------------------------------------------------------------------------

// Single harmonic oscillator padded with an empty second subsystem.
inline CoupledSystem build_harmonic_system(const OscillatorParams& p = {}) {
    return CoupledSystem(CoordinateLayout(1, 0), build_harmonic(p),
                         Subsystem::empty());
}

// The two-mass spring chain as one canonical subsystem (conserved H).
inline CoupledSystem build_spring_mass_system(const SpringMassParams& p) {
    return CoupledSystem(CoordinateLayout(2, 0), build_spring_mass(p),
                         Subsystem::empty());
}

struct CoupledOscillatorParams {
    OscillatorParams osc1{1.0, 1.0};
    OscillatorParams osc2{1.0, 1.0};
    double k_c = 0.5;  // coupling spring

    void validate() const {
        osc1.validate();
        osc2.validate();
        if (!std::isfinite(k_c))
            throw UsageError("CoupledOscillatorParams: k_c must be finite");
    }
};

// Two oscillators tied by a spring expressed as a gradient interaction:
// f1 = k_c (q2 - q1), f2 = -k_c (q2 - q1).
inline CoupledSystem build_coupled_oscillators(const CoupledOscillatorParams& p) {
    p.validate();
    Interaction inter;
    inter.label = "spring_gradient_coupling";
    const double kc = p.k_c;
    inter.f1 = [kc](const PhaseState& s) {
        return Vec::Constant(1, kc * (s.q2()[0] - s.q1()[0]));
    };
    inter.f2 = [kc](const PhaseState& s) {
        return Vec::Constant(1, -kc * (s.q2()[0] - s.q1()[0]));
    };
    return CoupledSystem(CoordinateLayout(1, 1), build_harmonic(p.osc1),
                         build_harmonic(p.osc2), std::move(inter));
}

// Two oscillators with a momentum-proportional force on the first:
// f1 = γ p1.  Not symplectic for γ ≠ 0; Verlet refuses it.
inline CoupledSystem build_velocity_coupled(double gamma,
                                            const OscillatorParams& p = {}) {
    if (!std::isfinite(gamma))
        throw UsageError("build_velocity_coupled: gamma must be finite");
    Interaction inter;
    inter.label = "momentum_proportional_forcing";
    inter.f1 = [gamma](const PhaseState& s) {
        return Vec::Constant(1, gamma * s.p1()[0]);
    };
    return CoupledSystem(CoordinateLayout(1, 1), build_harmonic(p),
                         build_harmonic(p), std::move(inter));
}

} // namespace hamcoup
