#include "ferro/fields.hpp"

#include <cmath>
#include <deque>
#include <numbers>

namespace ferro {

LoopSample circle_loop(const Point& center, double r, int samples)
{
    LoopSample loop;
    for (int k = 0; k < samples; ++k) {
        const double a = 2.0 * std::numbers::pi * k / samples;
        loop.points.push_back(center + r * Point(std::cos(a), std::sin(a)));
    }
    loop.points.push_back(loop.points.front());
    return loop;
}

Field prejacobian(const Field& q, const DomainGrid& grid)
{
    const auto [gx, gy] = gradient(q, grid);
    Field j = Field::Zero(q.rows(), 2);
    for (int id : grid.active_nodes()) {
        j(id, 0) = 0.5 * (q(id, 0) * gx(id, 1) - q(id, 1) * gx(id, 0));
        j(id, 1) = 0.5 * (q(id, 0) * gy(id, 1) - q(id, 1) * gy(id, 0));
    }
    return j;
}

ScalarField jacobian(const Field& q, const DomainGrid& grid)
{
    const Field j = prejacobian(q, grid);
    const auto [gx, gy] = gradient(j, grid);
    ScalarField J = ScalarField::Zero(q.rows());
    for (int id : grid.active_nodes())
        J(id) = 0.5 * (gx(id, 1) - gy(id, 0));
    return J;
}

double loop_degree_samples(const std::vector<QTensor>& qs, double snap_tol)
{
    if (qs.size() < 3)
        throw InvalidInput("loop_degree: loop too short");
    double total = 0;
    for (std::size_t k = 0; k + 1 < qs.size(); ++k) {
        if (qs[k].norm() < 0.5 || qs[k + 1].norm() < 0.5)
            throw DegenerateTensor("loop_degree: |Q| < 1/2 on the loop");
        const double a0 = std::atan2(qs[k](1), qs[k](0));
        const double a1 = std::atan2(qs[k + 1](1), qs[k + 1](0));
        total += std::remainder(a1 - a0, 2.0 * std::numbers::pi);
    }
    const double deg = total / (4.0 * std::numbers::pi);
    const double snapped = 0.5 * std::round(2.0 * deg);
    if (std::abs(deg - snapped) > snap_tol)
        throw NumericError("loop_degree: winding not close to a half-integer (loop too coarse)");
    return snapped;
}

double loop_degree(const Field& q, const DomainGrid& grid, const LoopSample& loop, double snap_tol)
{
    std::vector<QTensor> qs;
    qs.reserve(loop.points.size());
    for (const Point& p : loop.points) {
        if (grid.domain().signed_distance(p) >= 0)
            throw InvalidInput("loop_degree: loop leaves the domain");
        const Eigen::RowVectorXd v = interpolate(q, grid, p);
        qs.emplace_back(v(0), v(1));
    }
    return loop_degree_samples(qs, snap_tol);
}

Field frame_field(const Field& q, const DomainGrid& grid, const std::vector<int>& region)
{
    Field n = Field::Zero(q.rows(), 2);
    std::vector<char> in(q.rows(), 0), seen(q.rows(), 0);
    for (int id : region) {
        if (std::hypot(q(id, 0), q(id, 1)) < 0.5)
            throw DegenerateTensor("frame: |Q| < 1/2 in region");
        in[id] = 1;
    }
    for (int seed : region) {
        if (seen[seed])
            continue;
        std::deque<int> queue{seed};
        seen[seed] = 1;
        const auto pf = polar_decompose(QTensor(q(seed, 0), q(seed, 1)));
        n.row(seed) = pf.n.transpose();
        while (!queue.empty()) {
            const int a = queue.front();
            queue.pop_front();
            for (int b : grid.neighbours(a)) {
                if (b < 0 || !in[b] || seen[b])
                    continue;
                Vec2<double> nb = polar_decompose(QTensor(q(b, 0), q(b, 1))).n;
                if (nb.dot(n.row(a).transpose()) < 0)
                    nb = -nb;
                n.row(b) = nb.transpose();
                seen[b] = 1;
                queue.push_back(b);
            }
        }
    }
    return n;
}

Field u_coords(const Field& M, const Field& q, const DomainGrid& grid, const std::vector<int>& region)
{
    const Field n = frame_field(q, grid, region);
    Field u = Field::Zero(q.rows(), 2);
    for (int id : region) {
        const Vec2<double> nn = n.row(id).transpose();
        const Vec2<double> m = perp(nn);
        const Vec2<double> Mv = M.row(id).transpose();
        u(id, 0) = Mv.dot(nn);
        u(id, 1) = Mv.dot(m);
    }
    return u;
}

} // namespace ferro
