#include "ferro/connection.hpp"

#include "ferro/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ferro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;

struct Costs {
    std::vector<double> leg;
    std::vector<Point> foot;
    std::vector<std::vector<double>> pair;
    bool blocked = false;
};

Costs build_costs(const std::vector<Point>& pts, const Domain& dom)
{
    const int p = static_cast<int>(pts.size());
    Costs c;
    c.leg.resize(p);
    c.foot.resize(p);
    c.pair.assign(p, std::vector<double>(p, kInf));
    for (int i = 0; i < p; ++i) {
        c.foot[i] = dom.foot_point(pts[i]);
        c.leg[i] = dom.segment_inside(pts[i], c.foot[i]) ? (pts[i] - c.foot[i]).norm() : kInf;
        for (int j = i + 1; j < p; ++j) {
            if (dom.segment_inside(pts[i], pts[j]))
                c.pair[i][j] = c.pair[j][i] = (pts[i] - pts[j]).norm();
            else
                c.blocked = true;
        }
    }
    return c;
}

// dp[mask] = cheapest way to serve the points in mask; choice[mask] = partner of
// the lowest point (-1 for a boundary leg).
struct Table {
    std::vector<double> dp;
    std::vector<int> choice;
};

Table solve(const Costs& c, int p)
{
    const int full = (1 << p) - 1;
    Table t;
    t.dp.assign(full + 1, kInf);
    t.choice.assign(full + 1, -2);
    t.dp[0] = 0;
    for (int mask = 1; mask <= full; ++mask) {
        int i = 0;
        while (!(mask >> i & 1))
            ++i;
        const int rest = mask & ~(1 << i);
        double best = c.leg[i] + t.dp[rest];
        int arg = -1;
        for (int j = i + 1; j < p; ++j) {
            if (!(rest >> j & 1))
                continue;
            const double v = c.pair[i][j] + t.dp[rest & ~(1 << j)];
            if (v < best - kTieTol) {
                best = v;
                arg = j;
            }
        }
        t.dp[mask] = best;
        t.choice[mask] = std::isfinite(best) ? arg : -2;
    }
    return t;
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d)
{
    auto orient = [](const Point& p, const Point& q, const Point& r) {
        return (q - p).x() * (r - p).y() - (q - p).y() * (r - p).x();
    };
    auto on_seg = [](const Point& p, const Point& q, const Point& r) {
        return std::min(p.x(), q.x()) - 1e-12 <= r.x() && r.x() <= std::max(p.x(), q.x()) + 1e-12
            && std::min(p.y(), q.y()) - 1e-12 <= r.y() && r.y() <= std::max(p.y(), q.y()) + 1e-12;
    };
    const double scale = 1e-12 * std::max({1.0, (b - a).squaredNorm(), (d - c).squaredNorm()});
    const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > scale && o2 < -scale) || (o1 < -scale && o2 > scale))
        && ((o3 > scale && o4 < -scale) || (o3 < -scale && o4 > scale)))
        return true;
    if (std::abs(o1) <= scale && on_seg(a, b, c))
        return true;
    if (std::abs(o2) <= scale && on_seg(a, b, d))
        return true;
    if (std::abs(o3) <= scale && on_seg(c, d, a))
        return true;
    if (std::abs(o4) <= scale && on_seg(c, d, b))
        return true;
    return false;
}

} // namespace

void check_connection_points(const std::vector<Point>& points, const Domain& domain)
{
    if (points.empty())
        throw InvalidInput("minimal_connection: no points");
    if (points.size() > static_cast<std::size_t>(kMaxConnectionPoints))
        throw InvalidInput("minimal_connection: at most 12 points are supported");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(domain.signed_distance(points[i]) < 0))
            throw InvalidInput("minimal_connection: point not strictly inside the domain");
        for (std::size_t j = 0; j < i; ++j)
            if ((points[i] - points[j]).norm() <= 1e-9)
                throw InvalidInput("minimal_connection: coincident points");
    }
}

Connection minimal_connection(const std::vector<Point>& points, const Domain& domain)
{
    check_connection_points(points, domain);
    const int p = static_cast<int>(points.size());
    const Costs c = build_costs(points, domain);
    const Table t = solve(c, p);
    const int full = (1 << p) - 1;
    if (!std::isfinite(t.dp[full]))
        throw InfeasibleGeometry("minimal_connection: no admissible connection");

    Connection conn;
    conn.blocked_pairs = c.blocked;
    int mask = full;
    while (mask) {
        int i = 0;
        while (!(mask >> i & 1))
            ++i;
        const int j = t.choice[mask];
        Segment s;
        s.a = {Endpoint::Kind::Point, i, points[i]};
        if (j < 0) {
            s.b = {Endpoint::Kind::Boundary, -1, c.foot[i]};
            mask &= ~(1 << i);
        } else {
            s.b = {Endpoint::Kind::Point, j, points[j]};
            mask &= ~((1 << i) | (1 << j));
        }
        conn.segments.push_back(s);
    }
    for (const Segment& s : conn.segments)
        conn.total_length += s.length();
    return conn;
}

double minimal_connection_length(const std::vector<Point>& points, const Domain& domain)
{
    if (points.empty())
        return 0;
    try {
        return minimal_connection(points, domain).total_length;
    } catch (const InfeasibleGeometry&) {
        return kInf;
    }
}

ConnectionReport validate_connection(const Connection& conn, const std::vector<Point>& points,
                                     const Domain& domain, double angle_tol_deg)
{
    ConnectionReport r;
    std::vector<int> incidence(points.size(), 0);
    for (std::size_t k = 0; k < conn.segments.size(); ++k) {
        const Segment& s = conn.segments[k];
        if (!domain.segment_inside(s.a.pos, s.b.pos)) {
            r.contained = false;
            r.violations.push_back("segment " + std::to_string(k) + " leaves the domain");
        }
        for (const Endpoint* e : {&s.a, &s.b})
            if (e->kind == Endpoint::Kind::Point) {
                if (e->index < 0 || e->index >= static_cast<int>(points.size()))
                    r.violations.push_back("segment " + std::to_string(k) + " has a bad point index");
                else
                    ++incidence[e->index];
            }
        const bool leg_a = s.a.kind == Endpoint::Kind::Boundary, leg_b = s.b.kind == Endpoint::Kind::Boundary;
        if (leg_a != leg_b) {
            const Point& foot = leg_a ? s.a.pos : s.b.pos;
            const Point& inner = leg_a ? s.b.pos : s.a.pos;
            if (domain.near_corner(foot, 1e-6)) {
                r.orthogonality_skipped = true;
            } else {
                const Point dir = (inner - foot).normalized();
                const double c = std::min(1.0, std::abs(dir.dot(domain.outward_normal(foot))));
                const double ang = std::acos(c) * 180.0 / std::numbers::pi;
                r.max_leg_angle_deg = std::max(r.max_leg_angle_deg, ang);
                if (ang > angle_tol_deg) {
                    r.orthogonal = false;
                    r.violations.push_back("leg " + std::to_string(k) + " meets the boundary at "
                                           + std::to_string(ang) + " deg from the normal");
                }
            }
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (incidence[i] % 2 == 0) {
            r.odd_incidence = false;
            r.violations.push_back("point " + std::to_string(i) + " has even incidence");
        }
        if (incidence[i] != 1) {
            r.one_per_point = false;
            r.violations.push_back("point " + std::to_string(i) + " is on " + std::to_string(incidence[i])
                                   + " segments");
        }
    }
    for (std::size_t k = 0; k < conn.segments.size(); ++k)
        for (std::size_t l = k + 1; l < conn.segments.size(); ++l)
            if (segments_cross(conn.segments[k].a.pos, conn.segments[k].b.pos, conn.segments[l].a.pos,
                               conn.segments[l].b.pos)) {
                r.disjoint = false;
                r.violations.push_back("segments " + std::to_string(k) + " and " + std::to_string(l) + " meet");
            }
    return r;
}

} // namespace ferro
