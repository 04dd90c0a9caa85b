#include "ferro/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ferro {

DomainGrid::DomainGrid(const Domain& domain, double h) : domain_(domain), h_(h)
{
    if (!(h > 0))
        throw InvalidInput("grid spacing must be positive");
    if (h > 0.5 * domain.feature_size() + 1e-12)
        throw InvalidInput("grid spacing too large for the domain");

    const Point lo = domain.bbox_lo(), hi = domain.bbox_hi();
    origin_ = lo - Point(h, h);
    nx_ = static_cast<int>(std::ceil((hi.x() - lo.x()) / h - 1e-9)) + 3;
    ny_ = static_cast<int>(std::ceil((hi.y() - lo.y()) / h - 1e-9)) + 3;
    // Align the lattice with the centre for disks so the node set is symmetric.
    if (domain.shape() == Domain::Shape::Disk) {
        const int k = static_cast<int>(std::ceil(domain.radius() / h)) + 1;
        origin_ = domain.center() - Point(k * h, k * h);
        nx_ = ny_ = 2 * k + 1;
    }

    const double tol = 1e-12 * std::max(1.0, (hi - lo).norm());
    const int n = size();
    std::vector<char> inside(n, 0);
    for (int id = 0; id < n; ++id)
        inside[id] = domain.signed_distance(pos(id)) <= tol;

    kind_.assign(n, NodeKind::Exterior);
    nb_.assign(n, {-1, -1, -1, -1});
    bindex_.assign(n, -1);
    for (int id = 0; id < n; ++id) {
        if (!inside[id])
            continue;
        const int i = id % nx_, j = id / nx_;
        const int cand[4] = {i + 1 < nx_ ? id + 1 : -1, i > 0 ? id - 1 : -1, j + 1 < ny_ ? id + nx_ : -1,
                             j > 0 ? id - nx_ : -1};
        bool full = true;
        for (int k = 0; k < 4; ++k) {
            if (cand[k] >= 0 && inside[cand[k]])
                nb_[id][k] = cand[k];
            else
                full = false;
        }
        kind_[id] = full ? NodeKind::Interior : NodeKind::Boundary;
        active_.push_back(id);
        if (full) {
            interior_.push_back(id);
        } else {
            bindex_[id] = static_cast<int>(boundary_.size());
            boundary_ids_.push_back(id);
            BoundaryNode b;
            b.id = id;
            b.foot = domain.foot_point(pos(id));
            b.normal = domain.outward_normal(b.foot);
            b.tangent = perp(b.normal);
            b.s = domain.arclength(b.foot);
            b.theta = domain.boundary_angle(b.foot);
            boundary_.push_back(b);
        }
    }
    if (interior_.empty())
        throw InvalidInput("grid has no interior nodes");
    boundary_order_.resize(boundary_.size());
    std::iota(boundary_order_.begin(), boundary_order_.end(), 0);
    std::stable_sort(boundary_order_.begin(), boundary_order_.end(),
                     [&](int a, int b) { return boundary_[a].s < boundary_[b].s; });
}

int DomainGrid::cell_of(const Point& x, double* fx, double* fy) const
{
    const double u = (x.x() - origin_.x()) / h_, v = (x.y() - origin_.y()) / h_;
    const int i = static_cast<int>(std::floor(u)), j = static_cast<int>(std::floor(v));
    if (i < 0 || j < 0 || i + 1 >= nx_ || j + 1 >= ny_)
        return -1;
    if (fx)
        *fx = u - i;
    if (fy)
        *fy = v - j;
    return j * nx_ + i;
}

BcMode parse_bc_mode(const std::string& s)
{
    if (s == "mixed")
        return BcMode::Mixed;
    if (s == "dirichlet_both")
        return BcMode::DirichletBoth;
    throw ConfigError("unknown boundary mode '" + s + "'");
}

std::string to_string(BcMode m) { return m == BcMode::Mixed ? "mixed" : "dirichlet_both"; }

BoundaryData make_boundary_data(const DomainGrid& grid, double beta, int d, BcMode mode)
{
    BoundaryData bd;
    bd.mode = mode;
    bd.degree = d;
    const auto& bn = grid.boundary();
    bd.q_bd = Field::Zero(static_cast<int>(bn.size()), 2);
    if (mode == BcMode::DirichletBoth)
        bd.M_bd = Field::Zero(static_cast<int>(bn.size()), 2);
    const double amp = std::sqrt(std::numbers::sqrt2 * beta + 1.0);
    for (std::size_t k = 0; k < bn.size(); ++k) {
        const double a = d * bn[k].theta;
        const Vec2<double> n(std::cos(a), std::sin(a));
        bd.q_bd.row(k) = director_tensor(1.0, n).transpose();
        if (mode == BcMode::DirichletBoth)
            bd.M_bd.row(k) = amp * n.transpose();
    }
    return bd;
}

double boundary_degree(const DomainGrid& grid, const BoundaryData& bd)
{
    const auto& order = grid.boundary_order();
    double total = 0;
    const std::size_t n = order.size();
    for (std::size_t k = 0; k < n; ++k) {
        const int a = order[k], b = order[(k + 1) % n];
        const double a0 = std::atan2(bd.q_bd(a, 1), bd.q_bd(a, 0));
        const double a1 = std::atan2(bd.q_bd(b, 1), bd.q_bd(b, 0));
        total += std::remainder(a1 - a0, 2.0 * std::numbers::pi);
    }
    return total / (4.0 * std::numbers::pi);
}

void apply_boundary(const DomainGrid& grid, const BoundaryData& bd, Field& q, Field* M)
{
    const auto& bn = grid.boundary();
    for (std::size_t k = 0; k < bn.size(); ++k) {
        q.row(bn[k].id) = bd.q_bd.row(k);
        if (M && bd.mode == BcMode::DirichletBoth)
            M->row(bn[k].id) = bd.M_bd.row(k);
    }
}

Field laplacian(const Field& u, const DomainGrid& grid, Stencil bc)
{
    Field out = Field::Zero(u.rows(), u.cols());
    const double ih2 = 1.0 / (grid.h() * grid.h());
    const auto& nodes = bc == Stencil::Dirichlet ? grid.interior_nodes() : grid.active_nodes();
    for (int id : nodes) {
        const auto& nb = grid.neighbours(id);
        for (int c = 0; c < u.cols(); ++c) {
            double s = 0;
            for (int k = 0; k < 4; ++k)
                if (nb[k] >= 0)
                    s += u(nb[k], c) - u(id, c);
            out(id, c) = s * ih2;
        }
    }
    return out;
}

std::pair<Field, Field> gradient(const Field& u, const DomainGrid& grid)
{
    Field gx = Field::Zero(u.rows(), u.cols()), gy = Field::Zero(u.rows(), u.cols());
    const double h = grid.h();
    for (int id : grid.active_nodes()) {
        const auto& nb = grid.neighbours(id);
        for (int c = 0; c < u.cols(); ++c) {
            if (nb[0] >= 0 && nb[1] >= 0)
                gx(id, c) = (u(nb[0], c) - u(nb[1], c)) / (2 * h);
            else if (nb[0] >= 0)
                gx(id, c) = (u(nb[0], c) - u(id, c)) / h;
            else if (nb[1] >= 0)
                gx(id, c) = (u(id, c) - u(nb[1], c)) / h;
            if (nb[2] >= 0 && nb[3] >= 0)
                gy(id, c) = (u(nb[2], c) - u(nb[3], c)) / (2 * h);
            else if (nb[2] >= 0)
                gy(id, c) = (u(nb[2], c) - u(id, c)) / h;
            else if (nb[3] >= 0)
                gy(id, c) = (u(id, c) - u(nb[3], c)) / h;
        }
    }
    return {gx, gy};
}

Eigen::RowVectorXd interpolate(const Field& u, const DomainGrid& grid, const Point& x)
{
    double fx = 0, fy = 0;
    const int c = grid.cell_of(x, &fx, &fy);
    if (c < 0)
        throw InvalidInput("interpolate: point outside the lattice");
    const int ids[4] = {c, c + 1, c + grid.nx(), c + grid.nx() + 1};
    const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(u.cols());
    double wsum = 0;
    for (int k = 0; k < 4; ++k)
        if (grid.active(ids[k])) {
            out += w[k] * u.row(ids[k]);
            wsum += w[k];
        }
    if (wsum <= 1e-14) {
        // No weighted active corner: fall back to any active corner.
        for (int k = 0; k < 4; ++k)
            if (grid.active(ids[k]))
                return u.row(ids[k]);
        throw InvalidInput("interpolate: no active node near point");
    }
    return out / wsum;
}

double interpolate(const ScalarField& u, const DomainGrid& grid, const Point& x)
{
    double fx = 0, fy = 0;
    const int c = grid.cell_of(x, &fx, &fy);
    if (c < 0)
        throw InvalidInput("interpolate: point outside the lattice");
    const int ids[4] = {c, c + 1, c + grid.nx(), c + grid.nx() + 1};
    const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
    double out = 0, wsum = 0;
    for (int k = 0; k < 4; ++k)
        if (grid.active(ids[k])) {
            out += w[k] * u(ids[k]);
            wsum += w[k];
        }
    if (wsum <= 1e-14) {
        for (int k = 0; k < 4; ++k)
            if (grid.active(ids[k]))
                return u(ids[k]);
        throw InvalidInput("interpolate: no active node near point");
    }
    return out / wsum;
}

double blocked_sum(const std::vector<double>& v)
{
    // Pairwise summation: fixed association order, so results do not depend on threading.
    std::vector<double> a = v;
    std::size_t n = a.size();
    if (n == 0)
        return 0.0;
    while (n > 1) {
        const std::size_t m = (n + 1) / 2;
        for (std::size_t i = 0; i < n / 2; ++i)
            a[i] = a[2 * i] + a[2 * i + 1];
        if (n % 2)
            a[n / 2] = a[n - 1];
        n = m;
    }
    return a[0];
}

double integrate(const ScalarField& f, const DomainGrid& grid)
{
    const auto& act = grid.active_nodes();
    std::vector<double> v(act.size());
    for (std::size_t k = 0; k < act.size(); ++k)
        v[k] = f(act[k]);
    return blocked_sum(v) * grid.h() * grid.h();
}

double ball_integral_clipped(const ScalarField& f, const DomainGrid& grid, const Point& x0, double r)
{
    const double h = grid.h();
    const double half_diag = h / std::numbers::sqrt2;
    const Point o = grid.origin();
    const int i0 = std::max(0, static_cast<int>(std::floor((x0.x() - r - o.x()) / h)) - 1);
    const int i1 = std::min(grid.nx() - 1, static_cast<int>(std::ceil((x0.x() + r - o.x()) / h)) + 1);
    const int j0 = std::max(0, static_cast<int>(std::floor((x0.y() - r - o.y()) / h)) - 1);
    const int j1 = std::min(grid.ny() - 1, static_cast<int>(std::ceil((x0.y() + r - o.y()) / h)) + 1);
    constexpr int sub = 8;
    std::vector<double> v;
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
            const int id = j * grid.nx() + i;
            if (!grid.active(id))
                continue;
            const Point x = grid.pos(id);
            const double dist = (x - x0).norm();
            double frac;
            if (dist + half_diag <= r)
                frac = 1.0;
            else if (dist - half_diag >= r)
                continue;
            else {
                int cnt = 0;
                for (int a = 0; a < sub; ++a)
                    for (int b = 0; b < sub; ++b) {
                        const Point p = x + h * Point((a + 0.5) / sub - 0.5, (b + 0.5) / sub - 0.5);
                        if ((p - x0).squaredNorm() <= r * r)
                            ++cnt;
                    }
                frac = static_cast<double>(cnt) / (sub * sub);
            }
            v.push_back(frac * f(id));
        }
    return blocked_sum(v) * h * h;
}

double ball_integral(const ScalarField& f, const DomainGrid& grid, const Point& x0, double r)
{
    if (grid.domain().signed_distance(x0) > -r)
        throw InvalidInput("ball_integral: ball exits the domain");
    return ball_integral_clipped(f, grid, x0, r);
}

int circle_samples(const DomainGrid& grid, double r)
{
    return std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / (0.25 * grid.h()))));
}

double circle_integral(const ScalarField& f, const DomainGrid& grid, const Point& x0, double r)
{
    if (grid.domain().signed_distance(x0) > -r)
        throw InvalidInput("circle_integral: circle exits the domain");
    const int n = circle_samples(grid, r);
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * k / n;
        v[k] = interpolate(f, grid, x0 + r * Point(std::cos(a), std::sin(a)));
    }
    return blocked_sum(v) * 2.0 * std::numbers::pi * r / n;
}

} // namespace ferro
