#pragma once

#include "ferro/qtensor.hpp"

#include <string>
#include <vector>

namespace ferro {

using Point = Vec2<double>;

// Bounded simply connected planar domain described by a signed distance.
class Domain {
public:
    enum class Shape { Disk, Rectangle, Polygon };

    static Domain disk(Point center, double R);
    static Domain rectangle(Point lo, Point hi);
    static Domain polygon(std::vector<Point> vertices);

    Shape shape() const { return shape_; }
    std::string shape_name() const;

    // Negative inside, zero on the boundary.
    double signed_distance(const Point& x) const;
    Point sd_gradient(const Point& x) const;
    // Nearest boundary point (first edge on ties for polygons).
    Point foot_point(const Point& x) const;
    Point outward_normal(const Point& boundary_point) const;
    Point tangent(const Point& boundary_point) const { return perp(outward_normal(boundary_point)); }
    // Arclength of a boundary point, anticlockwise from a fixed origin.
    double arclength(const Point& boundary_point) const;
    double perimeter() const;
    // Angle of a boundary point around the centroid; parametrises boundary data.
    double boundary_angle(const Point& boundary_point) const;
    // Boundary point at arclength s.
    Point boundary_at(double s) const;
    // True when the nearest boundary point of x is a polygon corner.
    bool near_corner(const Point& boundary_point, double tol) const;

    Point centroid() const { return centroid_; }
    Point bbox_lo() const { return lo_; }
    Point bbox_hi() const { return hi_; }
    double feature_size() const;

    const Point& center() const { return center_; }
    double radius() const { return R_; }
    const std::vector<Point>& vertices() const { return verts_; }

    bool segment_inside(const Point& a, const Point& b, int samples = 64, double tol = 1e-9) const;

private:
    Shape shape_ = Shape::Disk;
    Point center_ = Point::Zero();
    double R_ = 1.0;
    std::vector<Point> verts_;
    std::vector<double> cum_;
    Point centroid_ = Point::Zero();
    Point lo_ = Point::Zero(), hi_ = Point::Zero();

    void finish_polygon();
    double polygon_distance(const Point& x, int* edge = nullptr, double* t = nullptr) const;
};

} // namespace ferro
