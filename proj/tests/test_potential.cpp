#include "ferro/potential.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace ferro;

namespace {

const double r2 = std::sqrt(2.0);

// Brute-force minimum of the reduced potential: a coarse grid followed by
// successively finer grids around the incumbent.
struct GridMin {
    double value, rho, m;
};
GridMin grid_oracle(double beta, double eps)
{
    auto g = [&](double r, double m) {
        return 0.25 * (1 - r * r) * (1 - r * r) + 0.25 * eps * (1 - m * m) * (1 - m * m) - eps * beta * r * m * m / r2;
    };
    double br = 1, bm = 1, best = 1e300;
    double lo_r = 0, hi_r = 2, lo_m = 0, hi_m = 3;
    for (int level = 0; level < 8; ++level) {
        const int n = 200;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double r = lo_r + (hi_r - lo_r) * i / n, m = lo_m + (hi_m - lo_m) * j / n;
                const double v = g(r, m);
                if (v < best) {
                    best = v;
                    br = r;
                    bm = m;
                }
            }
        const double wr = 4 * (hi_r - lo_r) / n, wm = 4 * (hi_m - lo_m) / n;
        lo_r = br - wr;
        hi_r = br + wr;
        lo_m = bm - wm;
        hi_m = bm + wm;
    }
    return {-best, br, bm};
}

} // namespace

TEST_CASE("kappa_star and c_beta examples")
{
    CHECK(kappa_star(1.0) == doctest::Approx((r2 + 1) / (2 * r2)).epsilon(1e-15));
    CHECK(kappa_star(1.0) == doctest::Approx(0.853553).epsilon(1e-6));
    CHECK(kappa_star(1e-12) == doctest::Approx(0.0).epsilon(1e-11));
    CHECK(kappa_star(2.0) == doctest::Approx(2 * (2 * r2 + 1) / (2 * r2)).epsilon(1e-15));
    CHECK(c_beta(0.0) == doctest::Approx(2 * r2 / 3).epsilon(1e-15));
    CHECK(c_beta(0.0) == doctest::Approx(0.942809).epsilon(1e-6));
    // (2 sqrt2 / 3)(sqrt2 + 1)^{3/2}, evaluated independently
    CHECK(c_beta(1.0) == doctest::Approx(3.53661078333046).epsilon(1e-13));
    double prev = c_beta(0.0);
    for (double b = 0.1; b <= 4; b += 0.1) {
        CHECK(c_beta(b) > prev);
        prev = c_beta(b);
    }
}

TEST_CASE("kappa_eps matches the grid oracle and zeroes the infimum")
{
    for (double beta : {0.5, 1.0, 2.0})
        for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
            const CouplingParams p{beta, eps};
            const KappaEps k = kappa_eps(p);
            const GridMin o = grid_oracle(beta, eps);
            CHECK(k.kappa_eps == doctest::Approx(o.value).epsilon(1e-6));
            CHECK(std::abs(k.kappa_eps - o.value) < 1e-10);
            CHECK(std::abs(k.s_pot - o.rho) < 1e-5);
            CHECK(std::abs(k.lambda_pot - o.m) < 1e-5);
            const PotentialConstants c = make_constants(p);
            // f_eps on the minimising pair is zero.
            const QTensor q = director_tensor(k.s_pot, Vec2<double>(1, 0));
            const Vec2<double> M(k.lambda_pot, 0);
            CHECK(std::abs(f_eps(q, M, p, c)) < 1e-10);
        }
}

TEST_CASE("kappa_eps at beta 1, eps 0.1 frozen value")
{
    // Closed-form inner minimum in |M|^2 and a 30-digit root of the radial equation.
    const KappaEps k = kappa_eps({1.0, 0.1});
    CHECK(std::abs(k.kappa_eps - 0.127765501400852336) < 1e-13);
    CHECK(std::abs(k.s_pot - 1.07958240796524153) < 1e-9);
    CHECK(std::abs(k.lambda_pot - 1.58957858662094723) < 1e-9);
}

TEST_CASE("kappa_eps second-order remainder shrinks with eps")
{
    for (double beta : {0.5, 1.0, 2.0}) {
        const double ks = kappa_star(beta);
        double prev = 1e300;
        for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
            const double k = kappa_eps({beta, eps}).kappa_eps;
            const double r = std::abs(k - 0.5 * (beta * beta + r2 * beta) * eps - ks * ks * eps * eps) / (eps * eps);
            CHECK(r < prev);
            prev = r;
            // The remainder is cubic: (kappa_*^3 - beta^2 kappa_*^2 / 2) eps^3 at leading order.
            const double c3 = ks * ks * ks - 0.5 * beta * beta * ks * ks;
            CHECK(r == doctest::Approx(std::abs(c3) * eps).epsilon(0.25));
        }
    }
}

TEST_CASE("constants relations")
{
    for (double beta : {0.5, 1.0, 2.0}) {
        double prev_l = 0, prev_s = 1e9;
        for (double eps : {0.1, 0.05, 0.025, 0.0125, 0.00625}) {
            const PotentialConstants c = make_constants({beta, eps});
            CHECK(c.chi_eps == doctest::Approx(c.kappa_eps / (eps * eps) - (beta * beta + r2 * beta) / (2 * eps)));
            const double s = c.s_star;
            CHECK(s > 1);
            CHECK(std::abs(s * s * s - (1 + beta * beta * eps) * s - beta * eps / r2) < 1e-14);
            CHECK(std::abs(c.lambda_pot - std::sqrt(r2 * beta + 1)) < 2 * std::abs(prev_l - std::sqrt(r2 * beta + 1)) + 1e-12);
            CHECK(std::abs(c.s_pot - 1) < prev_s);
            prev_l = c.lambda_pot;
            prev_s = std::abs(c.s_pot - 1);
        }
        // chi_eps -> kappa_*^2
        const double e = 1e-4;
        CHECK(make_constants({beta, e}).chi_eps == doctest::Approx(kappa_star(beta) * kappa_star(beta)).epsilon(1e-2));
    }
}

TEST_CASE("s_star expansion has a stable second-order constant")
{
    for (double beta : {0.5, 1.0, 2.0}) {
        std::vector<double> C;
        for (double eps : {0.1, 0.05, 0.025, 0.0125, 0.00625})
            C.push_back(std::abs(s_star(beta, eps) - 1 - eps * kappa_star(beta)) / (eps * eps));
        for (std::size_t i = 1; i < C.size(); ++i)
            CHECK(C[i] == doctest::Approx(C.back()).epsilon(0.3));
        CHECK(std::abs(C[C.size() - 2] - C.back()) < 0.05 * C.back());
    }
}

TEST_CASE("f_eps examples and sign")
{
    const CouplingParams p{1.0, 0.1};
    const PotentialConstants c = make_constants(p);
    CHECK(f_eps(QTensor(0, 0), Vec2<double>(0, 0), p, c) == doctest::Approx(0.25 + 0.1 / 4 + c.kappa_eps));
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int i = 0; i < 10000; ++i) {
        const QTensor q(u(rng), u(rng));
        const Vec2<double> M(u(rng), u(rng));
        CHECK(f_eps_checked(q, M, p, c) >= 0);
    }
    PotentialConstants stale = c;
    stale.kappa_eps = 0;
    const QTensor q = director_tensor(c.s_pot, Vec2<double>(1, 0));
    CHECK_THROWS_AS(f_eps_checked(q, Vec2<double>(c.lambda_pot, 0), p, stale), NumericError);
}

TEST_CASE("boundary pair gives kappa_*^2 eps^2 to leading order")
{
    for (double eps : {0.02, 0.01, 0.005}) {
        const CouplingParams p{1.0, eps};
        const PotentialConstants c = make_constants(p);
        const QTensor q(1, 0);
        const Vec2<double> M(std::sqrt(r2 + 1), 0);
        const double ks = kappa_star(1.0);
        CHECK(f_eps(q, M, p, c) / (ks * ks * eps * eps) == doctest::Approx(1.0).epsilon(0.1));
    }
}

TEST_CASE("ell minimum and wells")
{
    CHECK(ell_min(QTensor(1, 0), 1.0) == 0.0);
    const QTensor half = director_tensor(0.5, Vec2<double>(1, 0));
    CHECK(ell_min(half, 1.0) == doctest::Approx(0.5 * 0.5 * (r2 + 1.5)));
    CHECK_THROWS_AS(ell_min(QTensor(0, 0), 1.0), DegenerateTensor);
    const auto [Mp, Mm] = wells(QTensor(1, 0), 1.0);
    CHECK(Mp.norm() == doctest::Approx(1.55377).epsilon(1e-5));
    CHECK((Mp + Mm).norm() == 0.0);
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 10000; ++i) {
        const QTensor q(u(rng), u(rng));
        if (q.norm() < 1e-3)
            continue;
        const double beta = 0.2 + std::abs(u(rng));
        const auto [a, b] = wells(q, beta);
        CHECK(std::abs(ell(q, a, beta) - ell_min(q, beta)) < 1e-12);
        CHECK(std::abs(ell(q, b, beta) - ell_min(q, beta)) < 1e-12);
        CHECK(grad_ell(q, a, beta).norm() < 1e-12);
    }
}

// Brute-force grid search of ell(Q, .) over [-3, 3]^2: local minima of the
// sampled function, refined on a local grid.
TEST_CASE("wells oracle: exactly two minima at the predicted points")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0, 1);
    const double beta = 1.0;
    const int n = 600; // spacing 0.01 for the coarse pass
    const double lo = -3, step = 6.0 / n;
    for (int t = 0; t < 100; ++t) {
        const double rho = 0.3 + 1.7 * u(rng), th = 2 * std::numbers::pi * u(rng);
        const QTensor q = director_tensor(rho, Vec2<double>(std::cos(th), std::sin(th)));
        std::vector<double> v((n + 1) * (n + 1));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                v[i * (n + 1) + j] = ell(q, Vec2<double>(lo + i * step, lo + j * step), beta);
        std::vector<Vec2<double>> minima;
        for (int i = 1; i < n; ++i)
            for (int j = 1; j < n; ++j) {
                const double c = v[i * (n + 1) + j];
                bool is_min = true;
                for (int di = -1; di <= 1 && is_min; ++di)
                    for (int dj = -1; dj <= 1; ++dj)
                        if ((di || dj) && v[(i + di) * (n + 1) + j + dj] <= c) {
                            is_min = false;
                            break;
                        }
                if (!is_min)
                    continue;
                // refine at spacing 2e-4 on the surrounding cell
                Vec2<double> best(lo + i * step, lo + j * step);
                double bv = c;
                for (int a = -50; a <= 50; ++a)
                    for (int b = -50; b <= 50; ++b) {
                        const Vec2<double> M(lo + i * step + a * 2e-4, lo + j * step + b * 2e-4);
                        const double w = ell(q, M, beta);
                        if (w < bv) {
                            bv = w;
                            best = M;
                        }
                    }
                minima.push_back(best);
            }
        REQUIRE(minima.size() == 2);
        const auto [Mp, Mm] = wells(q, beta);
        for (const auto& m : minima)
            CHECK(std::min((m - Mp).norm(), (m - Mm).norm()) < 3e-3);
        CHECK((minima[0] - minima[1]).norm() > 1);
    }
}

TEST_CASE("well form of V")
{
    CHECK(V_potential(QTensor(1, 0), wells(QTensor(1, 0), 1.0).first, 1.0) == doctest::Approx(0.0));
    // M = 0, rho = 1, beta = 1: 1/4 (sqrt2 + 1)^2 both ways
    CHECK(V_potential(QTensor(1, 0), Vec2<double>(0, 0), 1.0) == doctest::Approx(0.25 * (r2 + 1) * (r2 + 1)));
    CHECK(V_factored(QTensor(1, 0), Vec2<double>(0, 0), 1.0) == doctest::Approx(0.25 * (r2 + 1) * (r2 + 1)));
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(-2, 2);
    double worst = 0, worst_prod = 0;
    for (int i = 0; i < 10000; ++i) {
        const QTensor q(u(rng), u(rng));
        if (q.norm() < 1e-3)
            continue;
        const Vec2<double> M(1.5 * u(rng), 1.5 * u(rng));
        const double beta = 0.1 + std::abs(u(rng));
        const double V = V_potential(q, M, beta);
        CHECK(V >= -1e-12);
        worst = std::max(worst, std::abs(V - V_factored(q, M, beta)) / std::max(1.0, V));
        const double t = M.dot(perp(polar_decompose(q).n));
        worst_prod = std::max(worst_prod, std::abs(V - (well_product(q, M, beta) - t * t)) / std::max(1.0, V));
    }
    CHECK(worst <= 1e-12);
    CHECK(worst_prod <= 1e-12);
    // The literal product form is not V off the director axis.
    const QTensor q(1, 0);
    const Vec2<double> m(0, 1);
    CHECK(std::abs(V_potential(q, m, 1e-9) - well_product(q, m, 1e-9)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("projection to the nearest well")
{
    const QTensor q(1, 0);
    const auto [Mp, Mm] = wells(q, 1.0);
    CHECK((project_well(q, Mp, 1.0) - Mp).norm() == 0.0);
    CHECK((project_well(q, Mp + Vec2<double>(0.3, 0.4), 1.0) - Mp).norm() == 0.0);
    CHECK((project_well(q, Mm + Vec2<double>(-0.5, 0.0), 1.0) - Mm).norm() == 0.0);
    CHECK_THROWS_AS(project_well(q, Vec2<double>(0, 0), 1.0), InvalidInput);
}

TEST_CASE("h potential")
{
    for (double beta : {0.5, 1.0, 2.0}) {
        const Vec2<double> up(std::sqrt(r2 * beta + 1), 0);
        CHECK(std::abs(h_potential(up, beta)) < 1e-14);
        CHECK(std::abs(h_potential(Vec2<double>(-up), beta)) < 1e-14);
        CHECK(h_potential(Vec2<double>(0, 0), beta) == doctest::Approx(0.25 + (beta * beta + r2 * beta) / 2));
        // quadratic growth near the well
        const double a = h_potential(Vec2<double>(up + Vec2<double>(1e-3, 0)), beta);
        const double b = h_potential(Vec2<double>(up + Vec2<double>(2e-3, 0)), beta);
        CHECK(b / a == doctest::Approx(4.0).epsilon(1e-2));
    }
}

TEST_CASE("g_eps near the shifted radius")
{
    const CouplingParams p{1.0, 0.01};
    const PotentialConstants c = make_constants(p);
    const QTensor q = director_tensor(1 + p.eps * c.kappa_star, Vec2<double>(1, 0));
    const double g = g_eps(q, p, c);
    CHECK(g >= 0);
    CHECK(g < 5 * c.kappa_star * c.kappa_star * p.eps);
}

TEST_CASE("u coordinates")
{
    const double beta = 1.0;
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 1000; ++i) {
        const QTensor q(u(rng), u(rng));
        if (q.norm() < 1e-3)
            continue;
        const auto [Mp, Mm] = wells(q, beta);
        const Vec2<double> w = u_of(q, Mp);
        CHECK(w(0) == doctest::Approx(std::sqrt(r2 * beta * q.norm() + 1)));
        CHECK(std::abs(w(1)) < 1e-12);
        const Vec2<double> mperp = perp(polar_decompose(q).n);
        CHECK(std::abs(u_of(q, Vec2<double>(0.7 * mperp))(0)) < 1e-14);
        const Vec2<double> M(u(rng), u(rng));
        CHECK(u_of(q, M).norm() == doctest::Approx(M.norm()));
    }
}

TEST_CASE("decomposition identities over random samples")
{
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> u(-2, 2);
    for (double beta : {0.5, 1.0, 2.0})
        for (double eps : {0.1, 0.02}) {
            const CouplingParams p{beta, eps};
            const PotentialConstants c = make_constants(p);
            double w1 = 0, w2 = 0;
            for (int i = 0; i < 10000; ++i) {
                const QTensor q(u(rng), u(rng));
                const Vec2<double> M(u(rng), u(rng));
                const DecomposeResiduals r = decompose_check(q, M, p, c);
                w1 = std::max(w1, r.f_ell);
                if (r.fgh_evaluated)
                    w2 = std::max(w2, r.fgh);
            }
            CHECK(w1 <= 1e-9);
            CHECK(w2 <= 1e-9);
        }
    const DecomposeResiduals z = decompose_check(QTensor(0, 0), Vec2<double>(1, 0), {1.0, 0.1}, make_constants({1.0, 0.1}));
    CHECK_FALSE(z.fgh_evaluated);
    CHECK(z.f_ell <= 1e-12);
}
