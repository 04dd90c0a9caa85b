#include "ferro/core_energy.hpp"

#include "ferro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ferro {

namespace {

constexpr double kPi = std::numbers::pi;

// Discrete energy: midpoint rule for f'^2 r, trapezoid for f^2 / r and the potential.
double discrete_energy(const std::vector<double>& f, double dr, double eps)
{
    const int n = static_cast<int>(f.size()) - 1;
    double e = 0;
    for (int i = 0; i < n; ++i) {
        const double d = f[i + 1] - f[i];
        e += kPi * (i + 0.5) * dr * d * d / dr;
    }
    for (int i = 1; i <= n; ++i) {
        const double w = i == n ? 0.5 : 1.0;
        const double r = i * dr, g = 1 - f[i] * f[i];
        e += w * dr * kPi * (f[i] * f[i] / r + g * g * r / (2 * eps * eps));
    }
    return e;
}

// Tridiagonal solve (Thomas); a: sub, b: diag, c: super.
std::vector<double> thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double> d)
{
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
    return x;
}

} // namespace

RadialProfile radial_vortex(double eps, int nodes)
{
    if (!(eps > 0))
        throw InvalidInput("radial_vortex: eps must be positive");
    const int n = nodes > 0 ? nodes : std::max(4000, static_cast<int>(std::ceil(80 / eps)));
    if (n < 2000)
        throw InvalidInput("radial_vortex: at least 2000 nodes");
    const double dr = 1.0 / n;
    RadialProfile p;
    p.eps = eps;
    p.r.resize(n + 1);
    p.f.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        p.r[i] = i * dr;
        p.f[i] = std::tanh(p.r[i] / eps) / std::tanh(1 / eps);
    }
    const int m = n - 1; // unknowns f_1 .. f_{n-1}
    double e = discrete_energy(p.f, dr, eps);
    for (int it = 0; it < 100; ++it) {
        std::vector<double> a(m), b(m), c(m), g(m);
        double gnorm = 0;
        for (int k = 0; k < m; ++k) {
            const int i = k + 1;
            const double r = i * dr, rl = (i - 0.5) * dr, rr = (i + 0.5) * dr, fi = p.f[i];
            g[k] = 2 * kPi * (rl * (fi - p.f[i - 1]) - rr * (p.f[i + 1] - fi)) / dr + 2 * kPi * dr * fi / r
                - 2 * kPi * dr * r * fi * (1 - fi * fi) / (eps * eps);
            b[k] = 2 * kPi * (rl + rr) / dr + 2 * kPi * dr / r + kPi * dr * r * (6 * fi * fi - 2) / (eps * eps);
            a[k] = -2 * kPi * rl / dr;
            c[k] = -2 * kPi * rr / dr;
            gnorm = std::max(gnorm, std::abs(g[k]));
        }
        p.newton_iterations = it;
        if (gnorm < 1e-12 * std::max(1.0, e))
            break;
        for (double& v : g)
            v = -v;
        const std::vector<double> step = thomas(a, b, c, g);
        double t = 1;
        std::vector<double> trial = p.f;
        for (int ls = 0; ls < 40; ++ls) {
            for (int k = 0; k < m; ++k)
                trial[k + 1] = p.f[k + 1] + t * step[k];
            const double et = discrete_energy(trial, dr, eps);
            if (et <= e + 1e-14 * std::abs(e))
                break;
            t *= 0.5;
        }
        const double enew = discrete_energy(trial, dr, eps);
        const bool stalled = std::abs(e - enew) <= 1e-15 * std::abs(e);
        p.f = trial;
        e = enew;
        if (stalled && gnorm < 1e-8)
            break;
        if (it == 99)
            throw NumericError("radial_vortex: Newton did not converge");
    }
    p.energy = e;
    return p;
}

CoreEnergyResult core_energy(std::vector<double> ladder, int nodes)
{
    if (ladder.size() < 2)
        throw InvalidInput("core_energy: need at least two eps values");
    std::sort(ladder.begin(), ladder.end(), std::greater<>());
    CoreEnergyResult res;
    for (double eps : ladder) {
        const RadialProfile p = radial_vortex(eps, nodes);
        res.eps.push_back(eps);
        res.gamma.push_back(p.energy);
        res.finite_part.push_back(p.energy - kPi * std::abs(std::log(eps)));
    }
    const std::size_t n = ladder.size();
    const double e1 = ladder[n - 2], e2 = ladder[n - 1];
    const double g1 = res.finite_part[n - 2], g2 = res.finite_part[n - 1];
    res.gamma_star = (g2 * e1 * e1 - g1 * e2 * e2) / (e1 * e1 - e2 * e2);
    res.spread = std::abs(g1 - g2) / std::abs(g2);
    return res;
}

} // namespace ferro
