#include "ferro/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ferro {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a)
{
    a = std::fmod(a, kTwoPi);
    return a < 0 ? a + kTwoPi : a;
}
} // namespace

Domain Domain::disk(Point center, double R)
{
    if (!(R > 0))
        throw InvalidInput("disk radius must be positive");
    Domain d;
    d.shape_ = Shape::Disk;
    d.center_ = center;
    d.R_ = R;
    d.centroid_ = center;
    d.lo_ = center - Point(R, R);
    d.hi_ = center + Point(R, R);
    return d;
}

Domain Domain::rectangle(Point lo, Point hi)
{
    if (!(hi.x() > lo.x() && hi.y() > lo.y()))
        throw InvalidInput("rectangle corners must satisfy lo < hi");
    Domain d = polygon({lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())});
    d.shape_ = Shape::Rectangle;
    return d;
}

Domain Domain::polygon(std::vector<Point> vertices)
{
    if (vertices.size() < 3)
        throw InvalidInput("polygon needs at least 3 vertices");
    Domain d;
    d.shape_ = Shape::Polygon;
    d.verts_ = std::move(vertices);
    d.finish_polygon();
    return d;
}

void Domain::finish_polygon()
{
    double area = 0;
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = verts_[i];
        const Point& b = verts_[(i + 1) % n];
        area += a.x() * b.y() - b.x() * a.y();
    }
    if (std::abs(area) < 1e-14)
        throw InvalidInput("degenerate polygon");
    if (area < 0)
        std::reverse(verts_.begin(), verts_.end());
    area = std::abs(area) * 0.5;

    // Simplicity check: non-adjacent edges must not intersect.
    auto orient = [](const Point& a, const Point& b, const Point& c) {
        return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1))
                continue;
            const Point &a = verts_[i], &b = verts_[(i + 1) % n], &c = verts_[j], &e = verts_[(j + 1) % n];
            if (orient(a, b, c) * orient(a, b, e) < 0 && orient(c, e, a) * orient(c, e, b) < 0)
                throw InvalidInput("polygon is not simple");
        }

    Point cen = Point::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = verts_[i];
        const Point& b = verts_[(i + 1) % n];
        const double w = a.x() * b.y() - b.x() * a.y();
        cen += (a + b) * w;
    }
    centroid_ = cen / (6.0 * area);
    cum_.assign(n + 1, 0.0);
    lo_ = hi_ = verts_[0];
    for (std::size_t i = 0; i < n; ++i) {
        cum_[i + 1] = cum_[i] + (verts_[(i + 1) % n] - verts_[i]).norm();
        lo_ = lo_.cwiseMin(verts_[i]);
        hi_ = hi_.cwiseMax(verts_[i]);
    }
}

std::string Domain::shape_name() const
{
    switch (shape_) {
    case Shape::Disk:
        return "disk";
    case Shape::Rectangle:
        return "rectangle";
    case Shape::Polygon:
        return "polygon";
    }
    return "unknown";
}

double Domain::polygon_distance(const Point& x, int* edge, double* t) const
{
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = verts_[i];
        const Point& b = verts_[(i + 1) % n];
        const Point ab = b - a;
        const double s = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        const double dist = (x - a - s * ab).norm();
        if (dist < best) {
            best = dist;
            if (edge)
                *edge = static_cast<int>(i);
            if (t)
                *t = s;
        }
    }
    return best;
}

double Domain::signed_distance(const Point& x) const
{
    if (shape_ == Shape::Disk)
        return (x - center_).norm() - R_;
    const double dist = polygon_distance(x);
    bool inside = false;
    const std::size_t n = verts_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = verts_[i];
        const Point& b = verts_[j];
        if ((a.y() > x.y()) != (b.y() > x.y())) {
            const double xc = (b.x() - a.x()) * (x.y() - a.y()) / (b.y() - a.y()) + a.x();
            if (x.x() < xc)
                inside = !inside;
        }
    }
    return inside ? -dist : dist;
}

Point Domain::sd_gradient(const Point& x) const
{
    if (shape_ == Shape::Disk) {
        const Point r = x - center_;
        const double n = r.norm();
        return n > 0 ? Point(r / n) : Point(1.0, 0.0);
    }
    const double step = 1e-7 * std::max(1.0, (hi_ - lo_).norm());
    Point g((signed_distance(x + Point(step, 0)) - signed_distance(x - Point(step, 0))) / (2 * step),
            (signed_distance(x + Point(0, step)) - signed_distance(x - Point(0, step))) / (2 * step));
    const double n = g.norm();
    return n > 0 ? Point(g / n) : Point(1.0, 0.0);
}

Point Domain::foot_point(const Point& x) const
{
    if (shape_ != Shape::Disk) {
        int e = 0;
        double t = 0;
        polygon_distance(x, &e, &t);
        const Point& a = verts_[e];
        return a + t * (verts_[(e + 1) % verts_.size()] - a);
    }
    Point y = x;
    for (int it = 0; it < 50; ++it) {
        const double s = signed_distance(y);
        if (std::abs(s) < 1e-14)
            break;
        y -= s * sd_gradient(y);
    }
    return y;
}

Point Domain::outward_normal(const Point& bp) const
{
    if (shape_ == Shape::Disk)
        return sd_gradient(bp);
    int e = 0;
    double t = 0;
    polygon_distance(bp, &e, &t);
    const Point ab = verts_[(e + 1) % verts_.size()] - verts_[e];
    return Point(ab.y(), -ab.x()).normalized();
}

double Domain::arclength(const Point& bp) const
{
    if (shape_ == Shape::Disk)
        return R_ * wrap_angle(std::atan2(bp.y() - center_.y(), bp.x() - center_.x()));
    int e = 0;
    double t = 0;
    polygon_distance(bp, &e, &t);
    return cum_[e] + t * (cum_[e + 1] - cum_[e]);
}

double Domain::perimeter() const
{
    if (shape_ == Shape::Disk)
        return kTwoPi * R_;
    return cum_.back();
}

Point Domain::boundary_at(double s) const
{
    s = std::fmod(s, perimeter());
    if (s < 0)
        s += perimeter();
    if (shape_ == Shape::Disk) {
        const double a = s / R_;
        return center_ + R_ * Point(std::cos(a), std::sin(a));
    }
    const std::size_t n = verts_.size();
    std::size_t e = std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin();
    e = std::clamp<std::size_t>(e, 1, n) - 1;
    const double t = (s - cum_[e]) / (cum_[e + 1] - cum_[e]);
    return verts_[e] + t * (verts_[(e + 1) % n] - verts_[e]);
}

double Domain::boundary_angle(const Point& bp) const
{
    return std::atan2(bp.y() - centroid_.y(), bp.x() - centroid_.x());
}

bool Domain::near_corner(const Point& bp, double tol) const
{
    if (shape_ == Shape::Disk)
        return false;
    for (const Point& v : verts_)
        if ((v - bp).norm() < tol)
            return true;
    return false;
}

double Domain::feature_size() const
{
    if (shape_ == Shape::Disk)
        return R_;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < cum_.size(); ++i)
        m = std::min(m, cum_[i + 1] - cum_[i]);
    return m;
}

bool Domain::segment_inside(const Point& a, const Point& b, int samples, double tol) const
{
    for (int k = 0; k <= samples; ++k) {
        const double t = static_cast<double>(k) / samples;
        if (signed_distance(a + t * (b - a)) > tol)
            return false;
    }
    return true;
}

} // namespace ferro
