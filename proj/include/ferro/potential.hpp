#pragma once

// Bulk potentials of the coupled Q/M model and their derived constants.

#include "ferro/qtensor.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace ferro {

struct CouplingParams {
    double beta = 1.0;
    double eps = 0.1;
};

struct PotentialConstants {
    double kappa_star = 0;
    double kappa_eps = 0;
    double chi_eps = 0;
    double s_star = 0;
    double c_beta = 0;
    double s_pot = 0;      // |Q| at the minimiser of f_eps
    double lambda_pot = 0; // |M| at the minimiser of f_eps
};

double kappa_star(double beta);
double c_beta(double beta);
double s_star(double beta, double eps);

struct KappaEps {
    double kappa_eps;
    double s_pot;
    double lambda_pot;
};
// inf f_eps = 0 fixes kappa_eps; computed on the reduced (rho, |M|) problem.
KappaEps kappa_eps(const CouplingParams& p);

PotentialConstants make_constants(const CouplingParams& p);

// Reduced potential g(rho, m) without the constant; kappa_eps = -min g.
inline double reduced_potential(double rho, double m, const CouplingParams& p)
{
    const double a = 1.0 - rho * rho;
    const double b = 1.0 - m * m;
    return 0.25 * a * a + 0.25 * p.eps * b * b - p.eps * p.beta * rho * m * m / std::numbers::sqrt2;
}

template <typename Scalar>
Scalar f_eps(const QTensorT<Scalar>& q, const Vec2<Scalar>& M, const CouplingParams& p, const PotentialConstants& c)
{
    const Scalar a = Scalar(1) - q.squaredNorm();
    const Scalar b = Scalar(1) - M.squaredNorm();
    return Scalar(0.25) * a * a + Scalar(0.25 * p.eps) * b * b - Scalar(p.eps * p.beta) * quad_form(q, M)
        + Scalar(c.kappa_eps);
}

// Same as f_eps but raises when the value is negative beyond the slack (stale kappa_eps).
double f_eps_checked(const QTensor& q, const Vec2<double>& M, const CouplingParams& p, const PotentialConstants& c);

template <typename Scalar>
Scalar ell(const QTensorT<Scalar>& q, const Vec2<Scalar>& M, Scalar beta)
{
    const Scalar b = M.squaredNorm() - Scalar(1);
    return Scalar(0.25) * b * b - beta * quad_form(q, M)
        + Scalar(0.5) * (beta * beta + Scalar(std::numbers::sqrt2) * beta);
}

template <typename Scalar>
Scalar ell_min(const QTensorT<Scalar>& q, Scalar beta)
{
    const Scalar rho = q.norm();
    if (!(rho > Scalar(0)))
        throw DegenerateTensor("ell_min: Q = 0");
    return Scalar(0.5) * beta * (Scalar(1) - rho) * (Scalar(std::numbers::sqrt2) + beta + beta * rho);
}

// grad_M ell = (|M|^2 - 1) M - 2 beta Q M
template <typename Scalar>
Vec2<Scalar> grad_ell(const QTensorT<Scalar>& q, const Vec2<Scalar>& M, Scalar beta)
{
    return (M.squaredNorm() - Scalar(1)) * M - Scalar(2) * beta * apply(q, M);
}

template <typename Scalar>
std::pair<Vec2<Scalar>, Vec2<Scalar>> wells(const QTensorT<Scalar>& q, Scalar beta)
{
    using std::sqrt;
    const auto pf = polar_decompose(q);
    const Scalar amp = sqrt(Scalar(std::numbers::sqrt2) * beta * pf.rho + Scalar(1));
    return {amp * pf.n, -amp * pf.n};
}

template <typename Scalar>
Scalar V_potential(const QTensorT<Scalar>& q, const Vec2<Scalar>& M, Scalar beta)
{
    return ell(q, M, beta) - ell_min(q, beta);
}

// Well form of V: 1/4 (|M|^2 - |M_pm|^2)^2 + sqrt2 beta rho (M.m)^2.
template <typename Scalar>
Scalar V_factored(const QTensorT<Scalar>& q, const Vec2<Scalar>& M, Scalar beta)
{
    const auto pf = polar_decompose(q);
    const Scalar a2 = Scalar(std::numbers::sqrt2) * beta * pf.rho + Scalar(1);
    const Scalar t = M.dot(perp(pf.n));
    const Scalar b = M.squaredNorm() - a2;
    return Scalar(0.25) * b * b + Scalar(std::numbers::sqrt2) * beta * pf.rho * t * t;
}

// 1/4 |M - M_+|^2 |M - M_-|^2; equals V + (M.m)^2, not V.
template <typename Scalar>
Scalar well_product(const QTensorT<Scalar>& q, const Vec2<Scalar>& M, Scalar beta)
{
    const auto [Mp, Mm] = wells(q, beta);
    return Scalar(0.25) * (M - Mp).squaredNorm() * (M - Mm).squaredNorm();
}

// The unique well within distance 1 of M.
Vec2<double> project_well(const QTensor& q, const Vec2<double>& M, double beta);

template <typename Scalar>
Scalar h_potential(const Vec2<Scalar>& u, Scalar beta)
{
    const Scalar b = u.squaredNorm() - Scalar(1);
    return Scalar(0.25) * b * b - beta / Scalar(std::numbers::sqrt2) * (u(0) * u(0) - u(1) * u(1))
        + Scalar(0.5) * (beta * beta + Scalar(std::numbers::sqrt2) * beta);
}

template <typename Scalar>
Scalar g_eps(const QTensorT<Scalar>& q, const CouplingParams& p, const PotentialConstants& c)
{
    const Scalar rho = q.norm();
    const Scalar a = rho * rho - Scalar(1);
    const Scalar ks = Scalar(c.kappa_star);
    return Scalar(0.25 / (p.eps * p.eps)) * a * a - Scalar(2) * ks / Scalar(p.eps) * (rho - Scalar(1)) + ks * ks;
}

// u = (M.n, M.m) for the eigenframe of q.
template <typename Scalar>
Vec2<Scalar> u_of(const QTensorT<Scalar>& q, const Vec2<Scalar>& M)
{
    const auto pf = polar_decompose(q);
    return Vec2<Scalar>(M.dot(pf.n), M.dot(perp(pf.n)));
}

struct DecomposeResiduals {
    double f_ell = 0;
    double fgh = 0;
    bool fgh_evaluated = false;
};

// Residuals of f/eps^2 = (|Q|^2-1)^2/(4 eps^2) + ell/eps + chi_eps and of the (g, h) splitting.
DecomposeResiduals decompose_check(const QTensor& q, const Vec2<double>& M, const CouplingParams& p,
                                   const PotentialConstants& c);

} // namespace ferro
