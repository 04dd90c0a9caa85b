#include "ferro/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ferro {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct Grad2 {
    double g0, g1;
    double h00, h01, h11;
};

Grad2 reduced_derivatives(double rho, double m, const CouplingParams& p)
{
    const double e = p.eps, b = p.beta;
    Grad2 d;
    d.g0 = -rho * (1.0 - rho * rho) - e * b * m * m / kSqrt2;
    d.g1 = -e * m * (1.0 - m * m) - 2.0 * e * b * rho * m / kSqrt2;
    d.h00 = 3.0 * rho * rho - 1.0;
    d.h01 = -2.0 * e * b * m / kSqrt2;
    d.h11 = e * (3.0 * m * m - 1.0) - 2.0 * e * b * rho / kSqrt2;
    return d;
}

bool newton_reduced(const CouplingParams& p, double& rho, double& m)
{
    for (int it = 0; it < 100; ++it) {
        const Grad2 d = reduced_derivatives(rho, m, p);
        const double gnorm = std::hypot(d.g0, d.g1);
        if (gnorm < 1e-15)
            break;
        const double det = d.h00 * d.h11 - d.h01 * d.h01;
        double s0, s1;
        if (d.h00 > 0 && det > 0) {
            s0 = -(d.h11 * d.g0 - d.h01 * d.g1) / det;
            s1 = -(-d.h01 * d.g0 + d.h00 * d.g1) / det;
        } else {
            s0 = -d.g0;
            s1 = -d.g1;
        }
        const double g0 = reduced_potential(rho, m, p);
        double step = 1.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            const double r1 = rho + step * s0, m1 = m + step * s1;
            if (r1 >= 0 && m1 >= 0 && reduced_potential(r1, m1, p) <= g0 + 1e-16) {
                rho = r1;
                m = m1;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;
    }
    const Grad2 d = reduced_derivatives(rho, m, p);
    const double det = d.h00 * d.h11 - d.h01 * d.h01;
    return std::hypot(d.g0, d.g1) < 1e-12 && d.h00 > 0 && det > 0;
}

double golden(auto&& fn, double a, double b)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = fn(d);
        }
    }
    return 0.5 * (a + b);
}

// Fallback: coarse grid, then alternating golden-section line searches.
void grid_golden_reduced(const CouplingParams& p, double& rho, double& m)
{
    const double mmax = 2.0 * std::sqrt(kSqrt2 * p.beta + 1.0) + 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j) {
            const double r = 2.0 * i / 400.0, mm = mmax * j / 400.0;
            const double v = reduced_potential(r, mm, p);
            if (v < best) {
                best = v;
                rho = r;
                m = mm;
            }
        }
    const double dr = 2.0 / 400.0, dm = mmax / 400.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        const double r0 = rho, m0 = m;
        rho = golden([&](double r) { return reduced_potential(r, m, p); }, std::max(0.0, rho - dr), rho + dr);
        m = golden([&](double x) { return reduced_potential(rho, x, p); }, std::max(0.0, m - dm), m + dm);
        if (std::abs(rho - r0) + std::abs(m - m0) < 1e-15)
            break;
    }
}

} // namespace

double kappa_star(double beta) { return beta * (kSqrt2 * beta + 1.0) / (2.0 * kSqrt2); }

double c_beta(double beta) { return 2.0 * kSqrt2 / 3.0 * std::pow(kSqrt2 * beta + 1.0, 1.5); }

double s_star(double beta, double eps)
{
    // Largest root of X^3 - (1 + beta^2 eps) X - beta eps / sqrt(2), Newton from 1.5.
    const double a = 1.0 + beta * beta * eps, b = beta * eps / kSqrt2;
    double x = 1.5;
    for (int it = 0; it < 100; ++it) {
        const double f = x * x * x - a * x - b;
        const double df = 3.0 * x * x - a;
        const double dx = f / df;
        x -= dx;
        if (std::abs(dx) < 1e-16 * std::max(1.0, x))
            break;
    }
    // Guard: the root found must be the largest one (cubic increasing beyond it).
    if (3.0 * x * x - a <= 0)
        throw NumericError("s_star: Newton did not reach the largest root");
    return x;
}

KappaEps kappa_eps(const CouplingParams& p)
{
    if (!(p.beta > 0) || !(p.eps > 0))
        throw InvalidInput("kappa_eps: beta and eps must be positive");
    double rho = 1.0, m = std::sqrt(kSqrt2 * p.beta + 1.0);
    if (!newton_reduced(p, rho, m)) {
        grid_golden_reduced(p, rho, m);
        if (!newton_reduced(p, rho, m)) {
            const Grad2 d = reduced_derivatives(rho, m, p);
            if (std::hypot(d.g0, d.g1) > 1e-8)
                throw NumericError("kappa_eps: reduced minimisation failed");
        }
    }
    return {-reduced_potential(rho, m, p), rho, m};
}

PotentialConstants make_constants(const CouplingParams& p)
{
    PotentialConstants c;
    c.kappa_star = kappa_star(p.beta);
    const KappaEps k = kappa_eps(p);
    c.kappa_eps = k.kappa_eps;
    c.s_pot = k.s_pot;
    c.lambda_pot = k.lambda_pot;
    c.chi_eps = c.kappa_eps / (p.eps * p.eps) - (p.beta * p.beta + kSqrt2 * p.beta) / (2.0 * p.eps);
    c.s_star = s_star(p.beta, p.eps);
    c.c_beta = c_beta(p.beta);
    return c;
}

double f_eps_checked(const QTensor& q, const Vec2<double>& M, const CouplingParams& p, const PotentialConstants& c)
{
    const double v = f_eps(q, M, p, c);
    if (v < -1e-10)
        throw NumericError("f_eps: negative value, kappa_eps is stale");
    return v;
}

Vec2<double> project_well(const QTensor& q, const Vec2<double>& M, double beta)
{
    const auto [Mp, Mm] = wells(q, beta);
    if ((M - Mp).norm() <= 1.0)
        return Mp;
    if ((M - Mm).norm() <= 1.0)
        return Mm;
    throw InvalidInput("project_well: no well within distance 1");
}

DecomposeResiduals decompose_check(const QTensor& q, const Vec2<double>& M, const CouplingParams& p,
                                   const PotentialConstants& c)
{
    DecomposeResiduals r;
    const double e = p.eps, b = p.beta;
    const double lhs = f_eps(q, M, p, c) / (e * e);
    const double a = q.squaredNorm() - 1.0;
    const double rhs1 = 0.25 * a * a / (e * e) + ell(q, M, b) / e + c.chi_eps;
    r.f_ell = std::abs(lhs - rhs1) / std::max(1.0, std::abs(lhs));
    const double rho = q.norm();
    if (rho > 0) {
        const Vec2<double> u = u_of(q, M);
        const double ks = c.kappa_star;
        const double rhs2 = g_eps(q, p, c) + h_potential(u, b) / e
            + (rho - 1.0) / e * (2.0 * ks - b / kSqrt2 * (u(0) * u(0) - u(1) * u(1))) + c.kappa_eps / (e * e)
            - (b * b + kSqrt2 * b) / (2.0 * e) - ks * ks;
        r.fgh = std::abs(lhs - rhs2) / std::max(1.0, std::abs(lhs));
        r.fgh_evaluated = true;
    }
    return r;
}

} // namespace ferro
