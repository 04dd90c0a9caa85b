#pragma once

// Masked square lattice over a domain, boundary data, stencils and quadrature.

#include "ferro/domain.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace ferro {

// Node-indexed field: one row per lattice node, k components per row.
using Field = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ScalarField = Eigen::VectorXd;

enum class NodeKind : unsigned char { Exterior, Interior, Boundary };

struct BoundaryNode {
    int id;
    Point foot;
    Point normal;
    Point tangent;
    double s;     // arclength of the foot point
    double theta; // boundary angle of the foot point
};

class DomainGrid {
public:
    DomainGrid(const Domain& domain, double h);

    const Domain& domain() const { return domain_; }
    double h() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int size() const { return nx_ * ny_; }
    Point origin() const { return origin_; }

    Point pos(int id) const { return origin_ + h_ * Point(id % nx_, id / nx_); }
    NodeKind kind(int id) const { return kind_[id]; }
    bool active(int id) const { return kind_[id] != NodeKind::Exterior; }

    // Active 4-neighbours (E, W, N, S); -1 where the neighbour is exterior.
    const std::array<int, 4>& neighbours(int id) const { return nb_[id]; }

    const std::vector<int>& active_nodes() const { return active_; }
    const std::vector<int>& interior_nodes() const { return interior_; }
    const std::vector<int>& boundary_ids() const { return boundary_ids_; }
    const std::vector<BoundaryNode>& boundary() const { return boundary_; }
    // Boundary indices sorted by arclength.
    const std::vector<int>& boundary_order() const { return boundary_order_; }
    // Lattice id -> boundary index, -1 if not a boundary node.
    int boundary_index(int id) const { return bindex_[id]; }

    // Lattice cell containing x (lower-left node id), or -1 outside the lattice.
    int cell_of(const Point& x, double* fx = nullptr, double* fy = nullptr) const;

    Field zeros(int k) const { return Field::Zero(size(), k); }

private:
    Domain domain_;
    double h_;
    int nx_ = 0, ny_ = 0;
    Point origin_;
    std::vector<NodeKind> kind_;
    std::vector<std::array<int, 4>> nb_;
    std::vector<int> active_, interior_, boundary_ids_, bindex_, boundary_order_;
    std::vector<BoundaryNode> boundary_;
};

enum class BcMode { DirichletBoth, Mixed };

BcMode parse_bc_mode(const std::string& s);
std::string to_string(BcMode m);

struct BoundaryData {
    BcMode mode = BcMode::Mixed;
    int degree = 0;
    Field q_bd; // one row per boundary node
    Field M_bd; // dirichlet_both only
};

BoundaryData make_boundary_data(const DomainGrid& grid, double beta, int d, BcMode mode);

// Winding degree of q_bd along the boundary (half of the q-winding).
double boundary_degree(const DomainGrid& grid, const BoundaryData& bd);

// Writes boundary values of q (and M in dirichlet_both mode) into the fields.
void apply_boundary(const DomainGrid& grid, const BoundaryData& bd, Field& q, Field* M);

// 5-point Laplacian. Dirichlet: evaluated at interior nodes, boundary rows zero.
// Neumann: evaluated at all active nodes with mirror ghosts (missing neighbour =
// centre value), which gives zero flux through the exterior faces.
enum class Stencil { Dirichlet, Neumann };
Field laplacian(const Field& u, const DomainGrid& grid, Stencil bc);

// Central differences, one-sided next to exterior nodes.
std::pair<Field, Field> gradient(const Field& u, const DomainGrid& grid);

// Bilinear interpolation using active corners only (weights renormalised).
Eigen::RowVectorXd interpolate(const Field& u, const DomainGrid& grid, const Point& x);
double interpolate(const ScalarField& u, const DomainGrid& grid, const Point& x);

// Node-weighted quadrature over the ball with cell-area clipping; the ball must lie in the domain.
double ball_integral(const ScalarField& f, const DomainGrid& grid, const Point& x0, double r);
// Same quadrature, without the containment requirement (ball intersected with the active cells).
double ball_integral_clipped(const ScalarField& f, const DomainGrid& grid, const Point& x0, double r);
// Trapezoid rule on the sampled circle with bilinear interpolation.
double circle_integral(const ScalarField& f, const DomainGrid& grid, const Point& x0, double r);
int circle_samples(const DomainGrid& grid, double r);

// Total over active nodes with weight h^2 (deterministic blocked summation).
double integrate(const ScalarField& f, const DomainGrid& grid);

// Deterministic sum over an index list, independent of thread count.
double blocked_sum(const std::vector<double>& v);

} // namespace ferro
