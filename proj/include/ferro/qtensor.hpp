#pragma once

// Pointwise algebra of traceless symmetric 2x2 tensors.
//
// A tensor Q is stored through the isometric embedding q = sqrt(2) (Q11, Q12),
// so |Q| (Frobenius) = |q| and trace/symmetry hold by construction.

#include "ferro/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace ferro {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

// Embedded tensor; a plain 2-vector so Eigen expressions work on it.
template <typename Scalar>
using QTensorT = Vec2<Scalar>;
using QTensor = QTensorT<double>;

template <typename Scalar>
struct PolarFormT {
    Scalar rho;
    Scalar phi;
    Vec2<Scalar> n;
};
using PolarForm = PolarFormT<double>;

template <typename Scalar>
QTensorT<Scalar> q_embed(const Mat2<Scalar>& Q, Scalar tol = Scalar(1e-12))
{
    using std::abs;
    if (abs(Q(0, 1) - Q(1, 0)) > tol)
        throw InvalidInput("q_embed: matrix is not symmetric");
    if (abs(Q(0, 0) + Q(1, 1)) > tol)
        throw InvalidInput("q_embed: matrix is not traceless");
    const Scalar s = Scalar(std::numbers::sqrt2);
    return QTensorT<Scalar>(s * Scalar(0.5) * (Q(0, 0) - Q(1, 1)), s * Scalar(0.5) * (Q(0, 1) + Q(1, 0)));
}

template <typename Scalar>
Mat2<Scalar> to_matrix(const QTensorT<Scalar>& q)
{
    const Scalar a = q(0) / Scalar(std::numbers::sqrt2);
    const Scalar b = q(1) / Scalar(std::numbers::sqrt2);
    Mat2<Scalar> Q;
    Q << a, b, b, -a;
    return Q;
}

template <typename Scalar>
PolarFormT<Scalar> polar_decompose(const QTensorT<Scalar>& q, Scalar floor = Scalar(1e-12))
{
    using std::atan2;
    using std::cos;
    using std::sin;
    const Scalar rho = q.norm();
    if (!(rho > floor))
        throw DegenerateTensor("polar_decompose: |Q| below floor");
    const Scalar phi = Scalar(0.5) * atan2(q(1), q(0));
    return {rho, phi, Vec2<Scalar>(cos(phi), sin(phi))};
}

// rho * sqrt(2) (n (x) n - I/2), embedded.
template <typename Scalar>
QTensorT<Scalar> director_tensor(Scalar rho, const Vec2<Scalar>& n)
{
    using std::abs;
    if (abs(n.squaredNorm() - Scalar(1)) > Scalar(2e-12))
        throw InvalidInput("director_tensor: n is not a unit vector");
    return rho * QTensorT<Scalar>(n(0) * n(0) - n(1) * n(1), Scalar(2) * n(0) * n(1));
}

// 2 (Q11 P12 - Q12 P11); the sqrt(2) of the embedding makes this q1 p2 - q2 p1.
template <typename Scalar>
Scalar cross(const QTensorT<Scalar>& q, const QTensorT<Scalar>& p)
{
    return q(0) * p(1) - q(1) * p(0);
}

// Q M for an embedded Q.
template <typename Scalar>
Vec2<Scalar> apply(const QTensorT<Scalar>& q, const Vec2<Scalar>& M)
{
    const Scalar c = Scalar(1) / Scalar(std::numbers::sqrt2);
    return c * Vec2<Scalar>(q(0) * M(0) + q(1) * M(1), q(1) * M(0) - q(0) * M(1));
}

// QM.M
template <typename Scalar>
Scalar quad_form(const QTensorT<Scalar>& q, const Vec2<Scalar>& M)
{
    const Scalar c = Scalar(1) / Scalar(std::numbers::sqrt2);
    return c * (q(0) * (M(0) * M(0) - M(1) * M(1)) + Scalar(2) * q(1) * M(0) * M(1));
}

// Embedding of M (x) M - |M|^2 I / 2.
template <typename Scalar>
QTensorT<Scalar> dyad_traceless(const Vec2<Scalar>& M)
{
    const Scalar c = Scalar(1) / Scalar(std::numbers::sqrt2);
    return c * QTensorT<Scalar>(M(0) * M(0) - M(1) * M(1), Scalar(2) * M(0) * M(1));
}

template <typename Scalar>
Vec2<Scalar> perp(const Vec2<Scalar>& v)
{
    return Vec2<Scalar>(-v(1), v(0));
}

} // namespace ferro
