#pragma once

// Minimal connections of a point set relative to a domain: segments that give
// every point odd incidence and may end on the boundary.

#include "ferro/domain.hpp"

#include <string>
#include <vector>

namespace ferro {

struct Endpoint {
    enum class Kind { Point, Boundary };
    Kind kind = Kind::Point;
    int index = -1; // point index for Kind::Point
    Point pos = Point::Zero();
};

struct Segment {
    Endpoint a, b;
    double length() const { return (a.pos - b.pos).norm(); }
};

struct Connection {
    std::vector<Segment> segments;
    double total_length = 0;
    bool blocked_pairs = false; // some pair segment left the domain and was priced at infinity
};

constexpr int kMaxConnectionPoints = 12;

// Exact minimum over pairings and boundary legs (memoised bitmask recursion).
Connection minimal_connection(const std::vector<Point>& points, const Domain& domain);

// Just the length; 0 for no points, +inf when nothing is feasible.
double minimal_connection_length(const std::vector<Point>& points, const Domain& domain);

struct ConnectionReport {
    bool contained = true;
    bool odd_incidence = true;
    bool one_per_point = true;
    bool disjoint = true;
    bool orthogonal = true;
    bool orthogonality_skipped = false; // some leg ends at a polygon corner
    double max_leg_angle_deg = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ConnectionReport validate_connection(const Connection& conn, const std::vector<Point>& points,
                                     const Domain& domain, double angle_tol_deg = 2.0);

// Throws InvalidInput for coincident, exterior, or too many points.
void check_connection_points(const std::vector<Point>& points, const Domain& domain);

} // namespace ferro
