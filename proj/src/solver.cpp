#include "ferro/solver.hpp"

#include "ferro/fields.hpp"
#include "ferro/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace ferro {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr std::size_t kChunk = 1024;

bool m_free(const DomainGrid& g, const BoundaryData& bd, int id)
{
    return g.kind(id) == NodeKind::Interior || bd.mode == BcMode::Mixed;
}

double node_potential(double q0, double q1, double m0, double m1, const CouplingParams& p, double kappa)
{
    const double a = 1.0 - (q0 * q0 + q1 * q1);
    const double mm = m0 * m0 + m1 * m1;
    const double b = 1.0 - mm;
    const double qmm = kInvSqrt2 * (q0 * (m0 * m0 - m1 * m1) + 2.0 * q1 * m0 * m1);
    return 0.25 * a * a + 0.25 * p.eps * b * b - p.eps * p.beta * qmm + kappa;
}

} // namespace

double stable_dt(const DomainGrid& grid, const CouplingParams& p, double c_stab)
{
    return c_stab * std::min(grid.h() * grid.h(), p.eps * p.eps);
}

double resolve_dt(const SolverConfig& cfg, const DomainGrid& grid, const CouplingParams& p)
{
    const double bound = stable_dt(grid, p, cfg.c_stab);
    if (cfg.dt_policy == SolverConfig::DtPolicy::Fixed) {
        if (!(cfg.dt > 0))
            throw ConfigError("fixed dt must be positive");
        if (cfg.dt > bound * (1 + 1e-12) && !cfg.allow_unstable)
            throw ConfigError("fixed dt exceeds the stability bound c_stab*min(h^2, eps^2)");
        return cfg.dt;
    }
    if (!(cfg.safety > 0) || cfg.safety > 1.0)
        throw ConfigError("adaptive safety factor must lie in (0, 1]");
    return cfg.safety * bound;
}

std::pair<double, double> flow_step(Field& q, Field& M, const Problem& pb, double dt)
{
    const DomainGrid& g = pb.grid;
    const auto& act = g.active_nodes();
    const double eps = pb.params.eps, beta = pb.params.beta;
    const double ie2 = 1.0 / (eps * eps), h2 = g.h() * g.h(), ih2 = 1.0 / h2;
    const double kappa = pb.constants.kappa_eps;
    const bool mixed = pb.bd.mode == BcMode::Mixed;

    thread_local Field qn, Mn;
    qn = q;
    Mn = M;
    const std::size_t nchunks = (act.size() + kChunk - 1) / kChunk;
    std::vector<double> e_chunk(nchunks, 0.0), r_chunk(nchunks, 0.0);
    const double* Q = q.data();
    const double* Mv = M.data();
    double* QN = qn.data();
    double* MN = Mn.data();

#pragma omp parallel for schedule(static)
    for (long c = 0; c < static_cast<long>(nchunks); ++c) {
        double esum = 0, rsum = 0;
        const std::size_t end = std::min(act.size(), (c + 1) * kChunk);
        for (std::size_t k = c * kChunk; k < end; ++k) {
            const int a = act[k];
            const double q0 = Q[2 * a], q1 = Q[2 * a + 1];
            const double m0 = Mv[2 * a], m1 = Mv[2 * a + 1];
            const auto& nb = g.neighbours(a);
            double lq0 = 0, lq1 = 0, lm0 = 0, lm1 = 0;
            for (int j = 0; j < 4; ++j) {
                const int b = nb[j];
                if (b < 0)
                    continue;
                const double dq0 = Q[2 * b] - q0, dq1 = Q[2 * b + 1] - q1;
                const double dm0 = Mv[2 * b] - m0, dm1 = Mv[2 * b + 1] - m1;
                lq0 += dq0;
                lq1 += dq1;
                lm0 += dm0;
                lm1 += dm1;
                if (j == 0 || j == 2)
                    esum += 0.5 * (dq0 * dq0 + dq1 * dq1) + 0.5 * eps * (dm0 * dm0 + dm1 * dm1);
            }
            esum += h2 * ie2 * node_potential(q0, q1, m0, m1, pb.params, kappa);
            const bool interior = g.kind(a) == NodeKind::Interior;
            if (interior) {
                const double qq = q0 * q0 + q1 * q1 - 1.0;
                const double d0 = kInvSqrt2 * (m0 * m0 - m1 * m1), d1 = kInvSqrt2 * 2.0 * m0 * m1;
                const double r0 = -lq0 * ih2 + ie2 * (qq * q0 - eps * beta * d0);
                const double r1 = -lq1 * ih2 + ie2 * (qq * q1 - eps * beta * d1);
                QN[2 * a] = q0 - dt * r0;
                QN[2 * a + 1] = q1 - dt * r1;
                rsum += r0 * r0 + r1 * r1;
            }
            if (interior || mixed) {
                const double mm = m0 * m0 + m1 * m1 - 1.0;
                const double qm0 = kInvSqrt2 * (q0 * m0 + q1 * m1), qm1 = kInvSqrt2 * (q1 * m0 - q0 * m1);
                const double r0 = -lm0 * ih2 + ie2 * (mm * m0 - 2.0 * beta * qm0);
                const double r1 = -lm1 * ih2 + ie2 * (mm * m1 - 2.0 * beta * qm1);
                MN[2 * a] = m0 - dt * r0;
                MN[2 * a + 1] = m1 - dt * r1;
                rsum += r0 * r0 + r1 * r1;
            }
        }
        e_chunk[c] = esum;
        r_chunk[c] = rsum;
    }
    q.swap(qn);
    M.swap(Mn);
    return {blocked_sum(e_chunk), std::sqrt(h2 * blocked_sum(r_chunk))};
}

EnergyReport energy(const Field& q, const Field& M, const Problem& pb)
{
    const DomainGrid& g = pb.grid;
    const double eps = pb.params.eps, beta = pb.params.beta, h2 = g.h() * g.h();
    const auto& act = g.active_nodes();
    std::vector<double> gq, gm, pot, em, qp;
    bool ac_ok = true;
    for (int a : act) {
        const QTensor qa = q.row(a).transpose();
        const Vec2<double> Ma = M.row(a).transpose();
        const auto& nb = g.neighbours(a);
        double eq = 0, emm = 0;
        for (int j : {0, 2})
            if (nb[j] >= 0) {
                eq += 0.5 * (q.row(nb[j]) - q.row(a)).squaredNorm();
                emm += 0.5 * eps * (M.row(nb[j]) - M.row(a)).squaredNorm();
            }
        gq.push_back(eq);
        gm.push_back(emm);
        pot.push_back(h2 * f_eps(qa, Ma, pb.params, pb.constants) / (eps * eps));
        double vterm = 0;
        if (qa.norm() > 1e-12)
            vterm = h2 * V_potential(qa, Ma, beta) / eps;
        em.push_back(emm + vterm);
        qp.push_back(eq + h2 * g_eps(qa, pb.params, pb.constants));
        if (qa.norm() < 0.5)
            ac_ok = false;
    }
    EnergyReport r;
    r.grad_Q = blocked_sum(gq);
    r.grad_M = blocked_sum(gm);
    r.potential = blocked_sum(pot);
    r.F = r.grad_Q + r.grad_M + r.potential;
    r.E_M = blocked_sum(em);
    r.ac_available = ac_ok;
    if (ac_ok) {
        const Field u = u_coords(M, q, g, act);
        std::vector<double> ac;
        for (int a : act) {
            const auto& nb = g.neighbours(a);
            double s = 0;
            for (int j : {0, 2})
                if (nb[j] >= 0)
                    s += 0.5 * eps * (u.row(nb[j]) - u.row(a)).squaredNorm();
            const Vec2<double> ua = u.row(a).transpose();
            ac.push_back(s + h2 * h_potential(ua, beta) / eps);
        }
        r.Q_part = blocked_sum(qp);
        r.AC = blocked_sum(ac);
        r.remainder = r.F - r.Q_part - r.AC;
    }
    return r;
}

ElResidual el_residual(const Field& q, const Field& M, const Problem& pb)
{
    const DomainGrid& g = pb.grid;
    const double eps = pb.params.eps, beta = pb.params.beta;
    const Field lq = laplacian(q, g, Stencil::Dirichlet);
    const Field lm = laplacian(M, g, pb.bd.mode == BcMode::Mixed ? Stencil::Neumann : Stencil::Dirichlet);
    ElResidual r;
    r.RQ = Field::Zero(q.rows(), 2);
    r.RM = Field::Zero(q.rows(), 2);
    std::vector<double> acc;
    for (int a : g.active_nodes()) {
        const QTensor qa = q.row(a).transpose();
        const Vec2<double> Ma = M.row(a).transpose();
        double s = 0;
        if (g.kind(a) == NodeKind::Interior) {
            const Vec2<double> rq = -lq.row(a).transpose()
                + ((qa.squaredNorm() - 1.0) * qa - eps * beta * dyad_traceless(Ma)) / (eps * eps);
            r.RQ.row(a) = rq.transpose();
            s += rq.squaredNorm();
        }
        if (m_free(g, pb.bd, a)) {
            const Vec2<double> rm = -lm.row(a).transpose()
                + ((Ma.squaredNorm() - 1.0) * Ma - 2.0 * beta * apply(qa, Ma)) / (eps * eps);
            r.RM.row(a) = rm.transpose();
            s += rm.squaredNorm();
            if (qa.norm() >= 0.5) {
                const Vec2<double> alt = (-eps * lm.row(a).transpose() + grad_ell(qa, Ma, beta) / eps) / eps;
                r.rm_form_mismatch = std::max(r.rm_form_mismatch, (alt - rm).norm() / std::max(1.0, rm.norm()));
            }
        }
        acc.push_back(s);
    }
    r.norm = std::sqrt(g.h() * g.h() * blocked_sum(acc));
    return r;
}

SolveState initial_state(const Problem& pb, const InitSpec& init, std::uint64_t seed)
{
    const DomainGrid& g = pb.grid;
    const double beta = pb.params.beta, eps = pb.params.eps;
    SolveState s;
    s.q = g.zeros(2);
    s.M = g.zeros(2);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    if (init.type == InitSpec::Type::File) {
        if (init.q0.rows() != g.size() || init.M0.rows() != g.size() || init.q0.cols() != 2 || init.M0.cols() != 2)
            throw ConfigError("initial fields do not match the grid");
        s.q = init.q0;
        s.M = init.M0;
    } else if (init.type == InitSpec::Type::Random) {
        LaplaceSolver lap(g);
        s.q = lap.solve(pb.bd.q_bd);
        Field Mh;
        if (pb.bd.mode == BcMode::DirichletBoth)
            Mh = lap.solve(pb.bd.M_bd);
        for (int a : g.active_nodes()) {
            if (g.kind(a) == NodeKind::Interior) {
                s.q(a, 0) += init.amplitude * uni(rng);
                s.q(a, 1) += init.amplitude * uni(rng);
            }
        }
        for (int a : g.active_nodes()) {
            if (!m_free(g, pb.bd, a))
                continue;
            Vec2<double> Ma;
            if (pb.bd.mode == BcMode::DirichletBoth) {
                Ma = Mh.row(a).transpose();
            } else {
                const QTensor qa = s.q.row(a).transpose();
                const double rho = qa.norm();
                const double phi = 0.5 * std::atan2(qa(1), qa(0));
                Ma = std::sqrt(std::numbers::sqrt2 * beta * rho + 1.0) * Vec2<double>(std::cos(phi), std::sin(phi));
            }
            Ma(0) += init.amplitude * uni(rng);
            Ma(1) += init.amplitude * uni(rng);
            s.M.row(a) = Ma.transpose();
        }
    } else {
        std::vector<double> deg = init.degrees;
        if (deg.empty())
            deg.assign(init.points.size(), 0.5);
        if (deg.size() != init.points.size())
            throw ConfigError("seeded init: degrees and points differ in length");
        auto singular = [&](const Point& x) {
            double phi = 0;
            for (std::size_t j = 0; j < init.points.size(); ++j)
                phi += deg[j] * std::atan2(x.y() - init.points[j].y(), x.x() - init.points[j].x());
            return phi;
        };
        // Constant phase matching the boundary datum in the mean.
        std::complex<double> acc(0, 0);
        const auto& bn = g.boundary();
        for (std::size_t k = 0; k < bn.size(); ++k) {
            const double a = std::atan2(pb.bd.q_bd(k, 1), pb.bd.q_bd(k, 0)) - 2.0 * singular(g.pos(bn[k].id));
            acc += std::polar(1.0, a);
        }
        const double c = 0.5 * std::arg(acc);
        for (int a : g.active_nodes()) {
            const Point x = g.pos(a);
            double rho = 1.0;
            for (const Point& p : init.points)
                rho *= std::tanh((x - p).norm() / eps);
            const double phi = singular(x) + c;
            const Vec2<double> n(std::cos(phi), std::sin(phi));
            s.q.row(a) = director_tensor(rho, n).transpose();
            s.M.row(a) = (std::sqrt(std::numbers::sqrt2 * beta * rho + 1.0) * n).transpose();
        }
    }
    if (init.q_scale > 0)
        for (int a : g.interior_nodes()) {
            const double r = s.q.row(a).norm();
            if (r > 1e-8)
                s.q.row(a) *= init.q_scale / r;
        }
    apply_boundary(g, pb.bd, s.q, &s.M);
    return s;
}

SolveState relax(const Problem& pb, const SolverConfig& cfg, SolveState state)
{
    const double dt0 = resolve_dt(cfg, pb.grid, pb.params);
    double dt = state.dt > 0 ? std::min(state.dt, dt0) : dt0;
    double F_prev = 0;
    int increases = 0;
    bool first = state.residual0 <= 0;
    state.converged = false;
    for (long k = 0; k <= cfg.max_steps; ++k) {
        const auto [F, r] = flow_step(state.q, state.M, pb, dt);
        if (!std::isfinite(F) || !std::isfinite(r))
            throw NumericError("relaxation diverged (non-finite energy)");
        if (first) {
            state.residual0 = r;
            first = false;
        } else if (F > F_prev + cfg.energy_slack * std::abs(F_prev)) {
            if (++increases >= 10) {
                dt *= 0.5;
                ++state.dt_halvings;
                increases = 0;
                if (dt < 1e-6 * dt0)
                    throw NumericError("relaxation diverged (dt below floor)");
            }
        } else {
            increases = 0;
        }
        F_prev = F;
        state.F = F;
        state.residual = r;
        if (k % cfg.history_stride == 0)
            state.history.push_back({state.step, state.time, F, r, dt});
        if (r <= std::max(cfg.tol * state.residual0, cfg.abs_floor)) {
            state.converged = true;
            break;
        }
        if (k == cfg.max_steps)
            break;
        ++state.step;
        state.time += dt;
    }
    state.dt = dt;
    // Report the energy and residual of the final fields.
    const ElResidual er = el_residual(state.q, state.M, pb);
    state.residual = er.norm;
    state.F = energy(state.q, state.M, pb).F;
    return state;
}

} // namespace ferro
