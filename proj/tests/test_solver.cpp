#include "ferro/solver.hpp"

#include <doctest.h>

#include <random>

using namespace ferro;

namespace {

struct Small {
    DomainGrid grid;
    BoundaryData bd;
    Problem pb;
    Small(BcMode mode, double h = 0.1, double eps = 0.2, double beta = 1.0)
        : grid(Domain::disk(Point::Zero(), 1.0), h), bd(make_boundary_data(grid, beta, 1, mode)),
          pb{grid, bd, CouplingParams{beta, eps}, make_constants(CouplingParams{beta, eps})}
    {
    }
};

SolverConfig quick(long steps)
{
    SolverConfig c;
    c.max_steps = steps;
    c.history_stride = 1;
    c.tol = 1e-12;
    return c;
}

} // namespace

TEST_CASE("stable time step and its policy checks")
{
    Small s(BcMode::Mixed, 0.1, 0.2);
    CHECK(stable_dt(s.grid, s.pb.params) == doctest::Approx(0.2 * 0.01));
    Small t(BcMode::Mixed, 0.1, 0.05);
    CHECK(stable_dt(t.grid, t.pb.params) == doctest::Approx(0.2 * 0.0025));

    SolverConfig c;
    c.dt_policy = SolverConfig::DtPolicy::Fixed;
    c.dt = 0.001;
    CHECK(resolve_dt(c, s.grid, s.pb.params) == 0.001);
    c.dt = 0.01;
    CHECK_THROWS_AS(resolve_dt(c, s.grid, s.pb.params), ConfigError);
    c.allow_unstable = true;
    CHECK(resolve_dt(c, s.grid, s.pb.params) == 0.01);
    c.dt = 0;
    CHECK_THROWS_AS(resolve_dt(c, s.grid, s.pb.params), ConfigError);

    SolverConfig a;
    a.safety = 0.5;
    CHECK(resolve_dt(a, s.grid, s.pb.params) == doctest::Approx(0.001));
    a.safety = 1.5;
    CHECK_THROWS_AS(resolve_dt(a, s.grid, s.pb.params), ConfigError);
}

TEST_CASE("residual is the variational derivative of the discrete energy")
{
    for (BcMode mode : {BcMode::Mixed, BcMode::DirichletBoth}) {
        Small s(mode);
        SolveState st = initial_state(s.pb, InitSpec{}, 3);
        const ElResidual r = el_residual(st.q, st.M, s.pb);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1, 1);
        Field dq = s.grid.zeros(2), dM = s.grid.zeros(2);
        for (int a : s.grid.active_nodes()) {
            if (s.grid.kind(a) == NodeKind::Interior)
                dq.row(a) << u(rng), u(rng);
            if (s.grid.kind(a) == NodeKind::Interior || mode == BcMode::Mixed)
                dM.row(a) << u(rng), u(rng);
        }
        // dF = h^2 sum (R_Q . dq + eps R_M . dM); the M flow is rescaled by 1/eps.
        const double h2 = s.grid.h() * s.grid.h(), eps = s.pb.params.eps;
        double predicted = 0;
        for (int a : s.grid.active_nodes())
            predicted += h2 * (r.RQ.row(a).dot(dq.row(a)) + eps * r.RM.row(a).dot(dM.row(a)));
        const double t = 1e-6;
        const double Fp = energy(st.q + t * dq, st.M + t * dM, s.pb).F;
        const double Fm = energy(st.q - t * dq, st.M - t * dM, s.pb).F;
        const double fd = (Fp - Fm) / (2 * t);
        CHECK(fd == doctest::Approx(predicted).epsilon(1e-6));
        CHECK(r.rm_form_mismatch <= 1e-10);
    }
}

TEST_CASE("energy decreases along the flow")
{
    Small s(BcMode::Mixed);
    const SolveState st = relax(s.pb, quick(300), initial_state(s.pb, InitSpec{}, 1));
    REQUIRE(st.history.size() > 100);
    for (std::size_t k = 1; k < st.history.size(); ++k)
        CHECK(st.history[k].F <= st.history[k - 1].F + 1e-10 * std::abs(st.history[k - 1].F));
    CHECK(st.dt_halvings == 0);
}

TEST_CASE("relaxation is deterministic for a fixed seed")
{
    Small s(BcMode::Mixed);
    const SolveState a = relax(s.pb, quick(200), initial_state(s.pb, InitSpec{}, 9));
    const SolveState b = relax(s.pb, quick(200), initial_state(s.pb, InitSpec{}, 9));
    CHECK((a.q - b.q).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.M - b.M).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.F == b.F);
    const SolveState c = relax(s.pb, quick(200), initial_state(s.pb, InitSpec{}, 10));
    CHECK((a.q - c.q).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("unstable fixed step is refused or reported as divergence")
{
    Small s(BcMode::Mixed);
    SolverConfig c = quick(2000);
    c.dt_policy = SolverConfig::DtPolicy::Fixed;
    c.dt = 50 * stable_dt(s.grid, s.pb.params);
    CHECK_THROWS_AS(relax(s.pb, c, initial_state(s.pb, InitSpec{}, 1)), ConfigError);
    c.allow_unstable = true;
    CHECK_THROWS_AS(relax(s.pb, c, initial_state(s.pb, InitSpec{}, 1)), NumericError);
}

TEST_CASE("converged states obey the maximum principle")
{
    Small s(BcMode::Mixed, 0.05, 0.15);
    SolverConfig c;
    c.tol = 1e-4;
    c.max_steps = 100000;
    for (double scale : {0.0, 2.0}) {
        InitSpec init;
        init.q_scale = scale;
        const SolveState st = relax(s.pb, c, initial_state(s.pb, init, 2));
        REQUIRE(st.converged);
        const double sstar = s.pb.constants.s_star;
        double mq = 0, mM = 0;
        for (int a : s.grid.active_nodes()) {
            mq = std::max(mq, st.q.row(a).norm());
            mM = std::max(mM, st.M.row(a).squaredNorm());
        }
        CHECK(mq <= sstar + 0.05);
        CHECK(mM <= 1 + std::sqrt(2.0) * s.pb.params.beta * sstar + 0.05);
    }
}

TEST_CASE("seeded and file initial states")
{
    Small s(BcMode::Mixed);
    InitSpec seeded;
    seeded.type = InitSpec::Type::Seeded;
    seeded.points = {Point(-0.4, 0), Point(0.4, 0)};
    const SolveState st = initial_state(s.pb, seeded, 1);
    for (int a : s.grid.active_nodes())
        CHECK(st.q.row(a).norm() <= 1 + 1e-12);
    seeded.degrees = {0.5};
    CHECK_THROWS_AS(initial_state(s.pb, seeded, 1), ConfigError);

    InitSpec file;
    file.type = InitSpec::Type::File;
    file.q0 = st.q;
    file.M0 = st.M;
    const SolveState back = initial_state(s.pb, file, 1);
    CHECK((back.q - st.q).cwiseAbs().maxCoeff() == 0.0);
    file.q0 = Field::Zero(3, 2);
    CHECK_THROWS_AS(initial_state(s.pb, file, 1), ConfigError);
}

TEST_CASE("energy parts add up")
{
    Small s(BcMode::Mixed);
    const SolveState st = relax(s.pb, quick(400), initial_state(s.pb, InitSpec{}, 4));
    const EnergyReport e = energy(st.q, st.M, s.pb);
    CHECK(e.F == doctest::Approx(e.grad_Q + e.grad_M + e.potential).epsilon(1e-12));
    CHECK(e.grad_Q >= 0);
    CHECK(e.grad_M >= 0);
    CHECK(e.potential >= -1e-12);
    if (e.ac_available)
        CHECK(e.F == doctest::Approx(e.Q_part + e.AC + e.remainder).epsilon(1e-12));
}
