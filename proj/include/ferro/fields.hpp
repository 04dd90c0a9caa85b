#pragma once

// Field-level operations on embedded Q-tensor fields.

#include "ferro/grid.hpp"

#include <vector>

namespace ferro {

// Closed anticlockwise polygonal loop; first == last.
struct LoopSample {
    std::vector<Point> points;
};

LoopSample circle_loop(const Point& center, double r, int samples);

// j = (q1 grad q2 - q2 grad q1) / 2, which equals rho^2 grad phi.
Field prejacobian(const Field& q, const DomainGrid& grid);

// curl(j) / 2 = d1 Q11 d2 Q12 - d2 Q11 d1 Q12 (discrete curl of the discrete j).
ScalarField jacobian(const Field& q, const DomainGrid& grid);

// Degree (half-integer) along the loop from the accumulated q-angle increments.
double loop_degree(const Field& q, const DomainGrid& grid, const LoopSample& loop, double snap_tol = 0.1);
// Same, from explicit samples of q along the loop (closed: first == last).
double loop_degree_samples(const std::vector<QTensor>& qs, double snap_tol = 0.1);

// u = (M.n, M.m) on a node region with a continuous frame propagated breadth-first.
// Nodes outside the region get u = 0. Throws if |Q| < 1/2 somewhere in the region.
Field u_coords(const Field& M, const Field& q, const DomainGrid& grid, const std::vector<int>& region);

// Frame director field n on the region (sign-aligned across edges).
Field frame_field(const Field& q, const DomainGrid& grid, const std::vector<int>& region);

} // namespace ferro
