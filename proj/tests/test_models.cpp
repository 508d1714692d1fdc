#include "helpers.hpp"

#include <cmath>
#include <numbers>

using namespace hamcoup;
using test_util::random_vec;

namespace {

// Single discrete sine mode over the interior nodes i = 1..n_x-1.
Vec sine_mode(Index n_x, int mode = 1) {
    Vec u(n_x - 1);
    for (Index i = 1; i < n_x; ++i)
        u[i - 1] = std::sin(std::numbers::pi * mode * static_cast<double>(i) /
                            static_cast<double>(n_x));
    return u;
}

} // namespace

TEST_CASE("fourth difference of zero is zero") {
    REQUIRE(apply_delta4(Vec::Zero(12), 0.1).isZero(0.0));
}

TEST_CASE("sine modes are eigenvectors of the closed fourth difference") {
    // Unit spacing keeps 1/dx^4 from amplifying the rounding of the sine
    // inputs above the entrywise tolerance.
    const Index n_x = 16;
    const double dx = 1.0;
    const Vec u = sine_mode(n_x);
    const Vec d4 = apply_delta4(u, dx);
    const double lam2 =
        (2.0 - 2.0 * std::cos(std::numbers::pi / static_cast<double>(n_x))) /
        (dx * dx);
    const double lam4 = lam2 * lam2;
    for (Index i = 0; i < u.size(); ++i)
        REQUIRE(std::abs(d4[i] - lam4 * u[i]) <= 1e-10 * std::abs(lam4 * u[i]));

    // second mode, same closure
    const Vec u2 = sine_mode(n_x, 2);
    const Vec d4_2 = apply_delta4(u2, dx);
    const double mu2 =
        (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / static_cast<double>(n_x))) /
        (dx * dx);
    for (Index i = 0; i < u2.size(); ++i)
        REQUIRE(std::abs(d4_2[i] - mu2 * mu2 * u2[i]) <=
                1e-10 * std::max(std::abs(mu2 * mu2 * u2[i]), 1e-3));
}

TEST_CASE("an interior spike reproduces the raw stencil row") {
    const Index n = 15;
    const double dx = 0.05;
    const double dx4 = dx * dx * dx * dx;
    const Index j = 7;  // at least 3 nodes from both ends
    Vec u = Vec::Zero(n);
    u[j] = 1.0;
    const Vec d4 = apply_delta4(u, dx);
    const double pattern[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    for (Index i = 0; i < n; ++i) {
        const Index off = i - j;
        const double expected =
            (off >= -2 && off <= 2) ? pattern[off + 2] / dx4 : 0.0;
        REQUIRE(d4[i] == expected);
    }
}

TEST_CASE("apply_delta4 rejects empty input") {
    REQUIRE_THROWS_AS(apply_delta4(Vec(0), 0.1), LayoutError);
    REQUIRE_THROWS_AS(delta4_at(Vec::Ones(5), 0.1, 6), LayoutError);
}

TEST_CASE("the probed fourth-difference matrix is symmetric positive semidefinite") {
    const Index n = 10;
    const double dx = 0.1;
    Mat m(n, n);
    for (Index j = 0; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e[j] = 1.0;
        m.col(j) = apply_delta4(e, dx);
    }
    REQUIRE((m - m.transpose()).isZero(0.0));

    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec u = random_vec(rng, n);
        REQUIRE(u.dot(m * u) / u.squaredNorm() >= -1e-10);
    }
}

TEST_CASE("spring-mass subsystem energy and gradients") {
    const SpringMassParams sp{0.1, 0.1, 0.5};
    const Subsystem sub = build_spring_mass(sp);

    Vec q(2), p(2);
    q << 0.0, -1.0;
    p << 0.0, 0.0;
    REQUIRE(std::abs(sub.hamiltonian(q, p) - 0.25) < 1e-15);
    REQUIRE(sub.hamiltonian(Vec::Zero(2), Vec::Zero(2)) == 0.0);
    REQUIRE(sub.grad_q(Vec::Zero(2), Vec::Zero(2)).isZero(0.0));

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec qq = random_vec(rng, 2), pp = random_vec(rng, 2);
        const Vec fd_q = fd_gradient(
            [&](const Vec& x) { return sub.hamiltonian(x, pp); }, qq);
        const Vec fd_p = fd_gradient(
            [&](const Vec& x) { return sub.hamiltonian(qq, x); }, pp);
        REQUIRE((sub.grad_q(qq, pp) - fd_q).cwiseAbs().maxCoeff() < 1e-7);
        REQUIRE((sub.grad_p(qq, pp) - fd_p).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("beam energy: rest state, sine mode, and the gradient identity") {
    const BeamParams beam;
    const Subsystem sub = build_beam(beam);
    const Index n = beam.n_interior();
    const double dx = beam.dx();

    REQUIRE(sub.hamiltonian(Vec::Zero(n), Vec::Zero(n)) == 0.0);

    // single sine mode: H = (EI dx / 2) lam2^2 sum(sin^2)
    const Vec u = sine_mode(beam.n_x);
    const double lam2 =
        (2.0 - 2.0 * std::cos(std::numbers::pi / static_cast<double>(beam.n_x))) /
        (dx * dx);
    const double expected = 0.5 * beam.modulus * beam.inertia * dx * lam2 * lam2 *
                            u.squaredNorm();
    REQUIRE(std::abs(sub.hamiltonian(u, Vec::Zero(n)) - expected) <
            1e-10 * expected);

    // the dx-weighted FD gradient of the energy sum IS EI * delta4 (this pins
    // the ghost closure to the energy)
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec uu = random_vec(rng, n);
        const Vec fd = fd_gradient(
            [&](const Vec& x) { return sub.hamiltonian(x, Vec::Zero(n)); }, uu);
        const Vec weighted_fd = fd / dx;
        const Vec analytic = sub.grad_q(uu, Vec::Zero(n));
        REQUIRE(test_util::max_rel_diff(analytic, weighted_fd) < 1e-6);
    }
}

TEST_CASE("coupling force: zeros, the offset rest state, and its defining identity") {
    const BeamParams beam;
    const SpringMassParams sp;
    const CouplingSpec c;
    const Index n = beam.n_interior();
    const double dx = beam.dx();
    const double rho_a = beam.rho * beam.area;
    const double ei = beam.modulus * beam.inertia;

    REQUIRE(coupling_force(Vec::Zero(n), 0.3, 0.3, beam, sp, c) == 0.0);

    // mu = 0.2*0.1/0.3 = 1/15; f = mu * (k/m1) * (q2 - q1) = -1/3
    const double f0 = coupling_force(Vec::Zero(n), 0.0, -1.0, beam, sp, c);
    REQUIRE(std::abs(f0 - (-1.0 / 3.0)) < 1e-15);

    // equal accelerations of the coupling node and the attached mass:
    // (1/rhoA)(-EI d4 u_nb + f/dx) - (1/m1)(k(q2-q1) - f) = 0
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec u = random_vec(rng, n);
        const double q1 = random_vec(rng, 1)[0], q2 = random_vec(rng, 1)[0];
        const double f = coupling_force(u, q1, q2, beam, sp, c);
        const double d4 = delta4_at(u, dx, c.n_b);
        const double beam_acc = (-ei * d4 + f / dx) / rho_a;
        const double mass_acc = (sp.k * (q2 - q1) - f) / sp.m1;
        const double scale =
            std::max({1.0, std::abs(beam_acc), std::abs(mass_acc)});
        REQUIRE(std::abs(beam_acc - mass_acc) <= 1e-12 * scale);
    }
}

TEST_CASE("coupled beam-spring construction") {
    const BeamParams beam;
    const SpringMassParams sp;
    const CouplingSpec c;
    const CoupledSystem sys = build_coupled_beam_spring(beam, sp, c);
    const Index n = beam.n_interior();

    REQUIRE(sys.layout.dim_q1() == n);
    REQUIRE(sys.layout.dim_q2() == 2);
    REQUIRE(sys.layout.weight(0) == beam.dx());
    REQUIRE(sys.layout.weight(n) == 1.0);
    REQUIRE(sys.constraints.size() == 2);

    // the analytic interaction Jacobian agrees with central differences
    std::mt19937_64 rng(14);
    const PhaseState s = test_util::random_state(rng, sys.layout);
    const Mat analytic = sys.interaction.jacobian(s);
    const Mat fd = interaction_jacobian(sys, s);
    const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
    REQUIRE((analytic - fd).cwiseAbs().maxCoeff() < 1e-8 * scale);
}

TEST_CASE("constraint offsets can be pinned to a reference state") {
    const BeamParams beam;
    const SpringMassParams sp;
    const CouplingSpec c;
    std::mt19937_64 rng(33);
    const CoupledSystem base = build_coupled_beam_spring(beam, sp, c);
    const PhaseState ref = test_util::random_state(rng, base.layout);

    const CoupledSystem pinned = build_coupled_beam_spring(beam, sp, c, ref);
    REQUIRE(std::abs(pinned.constraints[0](ref)) < 1e-14);
    REQUIRE(std::abs(pinned.constraints[1](ref)) < 1e-12);
}

TEST_CASE("initial states satisfy the coupling conditions") {
    const BeamParams beam;
    const SpringMassParams sp;
    const CouplingSpec c;
    const CoupledSystem sys = build_coupled_beam_spring(beam, sp, c);

    const PhaseState s0 = beam_spring_initial_state(beam, sp, c, -1.0);
    REQUIRE(sys.constraints[0](s0) == 0.0);
    REQUIRE(sys.constraints[1](s0) == 0.0);
    REQUIRE(std::abs(total_energy(sys, s0) - 0.25) < 1e-15);

    // zero offset is an equilibrium: the trajectory stays at rest
    const PhaseState rest = beam_spring_initial_state(beam, sp, c, 0.0);
    IntegratorSpec spec;
    spec.dt = 5e-4;
    const Trajectory tr = integrate(sys, spec, rest, 100, 10);
    for (const PhaseState& s : tr.states)
        REQUIRE(s.z().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("total energy is conserved along near-exact dynamics") {
    const BeamParams beam;
    const SpringMassParams sp;
    const CouplingSpec c;
    const CoupledSystem sys = build_coupled_beam_spring(beam, sp, c);
    const PhaseState s0 = beam_spring_initial_state(beam, sp, c, -1.0);

    IntegratorSpec spec;
    spec.kind = IntegratorKind::implicit_midpoint;
    spec.dt = 1e-4;
    const Trajectory tr = integrate(sys, spec, s0, 10000, 10000);
    const double h0 = tr.energies.front()[2];
    REQUIRE(tr.max_abs_dh_total <= 1e-8 * h0);
}

TEST_CASE("parameter validation") {
    BeamParams beam;
    beam.n_x = 3;
    REQUIRE_THROWS_AS(build_beam(beam), UsageError);
    REQUIRE_THROWS_AS(build_spring_mass({0.0, 0.1, 0.5}), UsageError);
    CouplingSpec c;
    c.n_b = 51;  // out of 1..n_x-1 for n_x = 51
    REQUIRE_THROWS_AS(
        build_coupled_beam_spring(BeamParams{}, SpringMassParams{}, c),
        UsageError);
}
