#pragma once

// Explicit L2 gradient flow  q' = -R_Q,  M' = -R_M  for the coupled energy.

#include "ferro/grid.hpp"
#include "ferro/potential.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ferro {

struct Problem {
    const DomainGrid& grid;
    const BoundaryData& bd;
    CouplingParams params;
    PotentialConstants constants;
};

struct SolverConfig {
    enum class DtPolicy { Fixed, Adaptive };
    DtPolicy dt_policy = DtPolicy::Adaptive;
    double dt = 0;          // fixed policy
    double safety = 1.0;    // adaptive policy: dt = safety * c_stab * min(h^2, eps^2)
    double c_stab = 0.2;
    double tol = 1e-5;      // relative to the initial residual
    double abs_floor = 1e-8;
    long max_steps = 200000;
    int history_stride = 10;
    bool allow_unstable = false; // skip the stability-bound check for fixed dt
    double energy_slack = 1e-8;
};

double stable_dt(const DomainGrid& grid, const CouplingParams& p, double c_stab = 0.2);
// Resolved time step; throws ConfigError if a fixed dt breaks the bound.
double resolve_dt(const SolverConfig& cfg, const DomainGrid& grid, const CouplingParams& p);

struct InitSpec {
    enum class Type { Random, Seeded, File };
    Type type = Type::Random;
    double amplitude = 0.1;
    std::vector<Point> points;   // seeded defects
    std::vector<double> degrees; // seeded defects (default 1/2 each)
    double q_scale = 0;          // > 0: rescale interior |q| to this value (overshoot runs)
    Field q0, M0;                // file init
};

struct HistoryRow {
    long step;
    double time;
    double F;
    double residual;
    double dt;
};

struct SolveState {
    Field q, M;
    long step = 0;
    double time = 0;
    double F = 0;
    double residual = 0;
    double residual0 = 0;
    double dt = 0;
    bool converged = false;
    int dt_halvings = 0;
    std::vector<HistoryRow> history;
};

struct EnergyReport {
    double F = 0;          // total
    double grad_Q = 0;     // 1/2 |grad Q|^2
    double grad_M = 0;     // eps/2 |grad M|^2
    double potential = 0;  // f / eps^2
    double E_M = 0;        // eps/2 |grad M|^2 + V/eps over {Q != 0}
    bool ac_available = false;
    double Q_part = 0;     // 1/2 |grad Q|^2 + g_eps
    double AC = 0;         // eps/2 |grad u|^2 + h(u)/eps
    double remainder = 0;  // F - Q_part - AC
};

EnergyReport energy(const Field& q, const Field& M, const Problem& pb);

struct ElResidual {
    Field RQ, RM;
    double norm = 0;
    double rm_form_mismatch = 0; // max |R_M - (-eps Lap M + grad V / eps) / eps| where |Q| >= 1/2
};

ElResidual el_residual(const Field& q, const Field& M, const Problem& pb);

SolveState initial_state(const Problem& pb, const InitSpec& init, std::uint64_t seed);

// One forward Euler step at the given dt; returns (F, residual) of the state before the step.
std::pair<double, double> flow_step(Field& q, Field& M, const Problem& pb, double dt);

SolveState relax(const Problem& pb, const SolverConfig& cfg, SolveState state);

} // namespace ferro
