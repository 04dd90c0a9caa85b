#include "ferro/qtensor.hpp"

#include <doctest.h>
#include <unsupported/Eigen/AutoDiff>

#include <random>

using namespace ferro;

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::Vector2d>;

// Matrix with the given entries, built independently of the embedding.
Mat2<double> sym(double a, double b) { return (Mat2<double>() << a, b, b, -a).finished(); }

} // namespace

TEST_CASE("embedding examples")
{
    CHECK(q_embed<double>(Mat2<double>::Zero()).norm() == 0.0);
    const Vec2<double> n(1, 0);
    const Mat2<double> Q = std::sqrt(2.0) * (n * n.transpose() - 0.5 * Mat2<double>::Identity());
    const QTensor q = q_embed(Q);
    CHECK(q(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q(1) == doctest::Approx(0.0));

    const QTensor q2 = q_embed(sym(0.3, -0.4));
    CHECK(q2(0) == doctest::Approx(0.3 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(q2(1) == doctest::Approx(-0.4 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(q2.norm() == doctest::Approx(std::sqrt(2.0) * 0.5).epsilon(1e-15));
}

TEST_CASE("embedding rejects non-traceless or asymmetric input")
{
    Mat2<double> A;
    A << 1, 0, 0, 1;
    CHECK_THROWS_AS(q_embed(A), InvalidInput);
    A << 1, 0.2, 0.3, -1;
    CHECK_THROWS_AS(q_embed(A), InvalidInput);
}

TEST_CASE("embedding is an isometry and the matrix is traceless and symmetric")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 10000; ++i) {
        const QTensor q(u(rng), u(rng));
        const Mat2<double> Q = to_matrix(q);
        CHECK(Q.trace() == 0.0);
        CHECK(Q(0, 1) == Q(1, 0));
        CHECK(std::abs(Q.norm() - q.norm()) <= 1e-14 * (1 + q.norm()));
        CHECK((q_embed(Q) - q).norm() <= 1e-14 * (1 + q.norm()));
    }
}

TEST_CASE("polar decomposition examples")
{
    auto p = polar_decompose(QTensor(1, 0));
    CHECK(p.rho == 1.0);
    CHECK(p.phi == 0.0);
    CHECK(p.n(0) == 1.0);
    p = polar_decompose(QTensor(0, 1));
    CHECK(p.rho == doctest::Approx(1.0));
    CHECK(p.phi == doctest::Approx(std::numbers::pi / 4));
    CHECK_THROWS_AS(polar_decompose(QTensor(0, 0)), DegenerateTensor);
}

TEST_CASE("polar form reconstructs the tensor and n is the top eigenvector")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 10000; ++i) {
        const QTensor q(u(rng), u(rng));
        if (q.norm() < 1e-6)
            continue;
        const PolarForm pf = polar_decompose(q);
        CHECK((director_tensor(pf.rho, pf.n) - q).norm() <= 1e-14 * (1 + pf.rho));
        const Mat2<double> Q = to_matrix(q);
        // Q n = (rho / sqrt 2) n
        CHECK((Q * pf.n - pf.rho / std::sqrt(2.0) * pf.n).norm() <= 1e-13);
    }
}

TEST_CASE("director tensor examples")
{
    CHECK((director_tensor(1.0, Vec2<double>(1, 0)) - QTensor(1, 0)).norm() == 0.0);
    CHECK(director_tensor(0.0, Vec2<double>(0.6, 0.8)).norm() == 0.0);
    CHECK((director_tensor(2.0, Vec2<double>(0, 1)) - QTensor(-2, 0)).norm() <= 1e-15);
    CHECK_THROWS_AS(director_tensor(1.0, Vec2<double>(1, 1)), InvalidInput);
}

TEST_CASE("cross product constants and antisymmetry")
{
    // 2 (Q11 P12 - Q12 P11) for Q = diag(1,-1)/sqrt2, P = offdiag/sqrt2 is 1.
    CHECK(cross(QTensor(1, 0), QTensor(0, 1)) == doctest::Approx(1.0));
    const Mat2<double> Q = to_matrix(QTensor(1, 0)), P = to_matrix(QTensor(0, 1));
    CHECK(2 * (Q(0, 0) * P(0, 1) - Q(0, 1) * P(0, 0)) == doctest::Approx(1.0));
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 1000; ++i) {
        const QTensor a(u(rng), u(rng)), b(u(rng), u(rng));
        CHECK(cross(a, a) == 0.0);
        CHECK(cross(a, b) == -cross(b, a));
        const Mat2<double> A = to_matrix(a), B = to_matrix(b);
        CHECK(cross(a, b) == doctest::Approx(2 * (A(0, 0) * B(0, 1) - A(0, 1) * B(0, 0))));
    }
}

TEST_CASE("matrix actions agree with the embedded forms")
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 1000; ++i) {
        const QTensor q(u(rng), u(rng));
        const Vec2<double> M(u(rng), u(rng));
        const Mat2<double> Q = to_matrix(q);
        CHECK((apply(q, M) - Q * M).norm() <= 1e-13);
        CHECK(quad_form(q, M) == doctest::Approx(M.dot(Q * M)));
        const Mat2<double> D = M * M.transpose() - 0.5 * M.squaredNorm() * Mat2<double>::Identity();
        CHECK((dyad_traceless(M) - q_embed(D)).norm() <= 1e-13);
    }
}

// Gradient identities through automatic differentiation of the polar form:
// |grad Q|^2 = |grad rho|^2 + 4 rho^2 |grad phi|^2 and
// |Q|^2 |grad Q|^2 = |Q|^2 |grad |Q||^2 + 4 |j|^2 with j = (Q x grad Q) / 2.
TEST_CASE("polar gradient and pre-Jacobian identities over random samples")
{
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst_polar = 0, worst_prejac = 0, worst_j = 0;
    for (int i = 0; i < 10000; ++i) {
        // rho and phi as random quadratics evaluated at a random point.
        const double x = u(rng), y = u(rng);
        AD X(x, 2, 0), Y(y, 2, 1);
        const double c[6] = {1.2 + 0.5 * u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        const double e[6] = {u(rng), 3 * u(rng), 3 * u(rng), u(rng), u(rng), u(rng)};
        AD rho = c[0] + c[1] * X + c[2] * Y + 0.3 * (c[3] * X * X + c[4] * X * Y + c[5] * Y * Y);
        AD phi = e[0] + e[1] * X + e[2] * Y + e[3] * X * X + e[4] * X * Y + e[5] * Y * Y;
        if (rho.value() < 0.05)
            continue;
        using std::cos;
        using std::sin;
        const Vec2<AD> n(cos(phi), sin(phi));
        const QTensorT<AD> q = director_tensor(rho, n);
        const Eigen::Vector2d d1 = q(0).derivatives(), d2 = q(1).derivatives();
        const double gradQ = d1.squaredNorm() + d2.squaredNorm();
        const double r = rho.value();
        const double polar = rho.derivatives().squaredNorm() + 4 * r * r * phi.derivatives().squaredNorm();
        worst_polar = std::max(worst_polar, std::abs(gradQ - polar) / std::max(1.0, gradQ));

        const QTensor qv(q(0).value(), q(1).value());
        Eigen::Vector2d j;
        for (int k = 0; k < 2; ++k)
            j(k) = 0.5 * cross(qv, QTensor(d1(k), d2(k)));
        // |grad |Q|| from differentiating the norm of the embedded tensor
        using std::sqrt;
        const AD nrm = sqrt(q(0) * q(0) + q(1) * q(1));
        const double lhs = qv.squaredNorm() * gradQ;
        const double rhs = qv.squaredNorm() * nrm.derivatives().squaredNorm() + 4 * j.squaredNorm();
        worst_prejac = std::max(worst_prejac, std::abs(lhs - rhs) / std::max(1.0, lhs));
        // j = rho^2 grad phi
        worst_j = std::max(worst_j, (j - r * r * phi.derivatives()).norm() / std::max(1.0, j.norm()));
    }
    CHECK(worst_polar <= 1e-12);
    CHECK(worst_prejac <= 1e-12);
    CHECK(worst_j <= 1e-12);
}

TEST_CASE("embedding templates differentiate")
{
    AD a(0.3, 2, 0), b(-0.2, 2, 1);
    const QTensorT<AD> q(a, b);
    const AD f = quad_form(q, Vec2<AD>(AD(1.0), AD(2.0)));
    // d/dq1 of (q1 (1 - 4) + 2 q2 * 2) / sqrt2
    CHECK(f.derivatives()(0) == doctest::Approx(-3 / std::sqrt(2.0)));
    CHECK(f.derivatives()(1) == doctest::Approx(4 / std::sqrt(2.0)));
}
