#pragma once

// Canonical harmonic maps with prescribed half-integer singularities and the
// renormalised energy W of their positions.

#include "ferro/laplace.hpp"

#include <memory>
#include <vector>

namespace ferro {

struct CanonicalMap {
    std::vector<Point> points;
    std::vector<double> degrees;
    ScalarField H;   // harmonic correction of the director angle
    Field grad_H;    // nodal gradient of H (2 columns)
    ScalarField phi; // director angle at the nodes (singular part on the principal branch)
    Field q;         // embedded tensor field director_tensor(1, n(phi))
};

struct RenormResult {
    double W = 0;
    std::vector<double> sigma_ladder;
    std::vector<double> W_sigma;
    double slope = 0;               // coefficient of sigma^2 in the fit
    double extrapolation_error = 0; // |W - W_sigma| at the smallest sigma
    double fit_residual = 0;        // max residual of the fit relative to max(|W|, 1)
    bool flagged = false;           // fit residual above the requested tolerance
};

// Reusable evaluator: one Laplace factorisation per grid.
class RenormalizedEnergy {
public:
    RenormalizedEnergy(const DomainGrid& grid, const BoundaryData& bd,
                       LaplaceSolver::Method method = LaplaceSolver::Method::Cholesky);
    ~RenormalizedEnergy();

    const DomainGrid& grid() const { return grid_; }

    CanonicalMap canonical_map(const std::vector<Point>& points, const std::vector<double>& degrees) const;
    // Exact gradient of the director angle at x (analytic singular part).
    Point grad_phi(const CanonicalMap& map, const Point& x) const;

    // Radius of the smooth cutoff around each point (balls disjoint and inside).
    double cutoff_radius(const std::vector<Point>& points) const;
    // Default ladder: geometric from min(16h, cutoff / 2) down to 4h.
    std::vector<double> default_ladder(const std::vector<Point>& points) const;
    RenormResult energy(const std::vector<Point>& points, const std::vector<double>& degrees,
                        std::vector<double> ladder = {}, double fit_tol = 0.02) const;
    // Gradient of W with respect to points[j], from the circle integral of the stress tensor.
    Point gradient(const std::vector<Point>& points, const std::vector<double>& degrees, int j,
                   double radius = 0) const;
    double w_beta(const std::vector<Point>& points, const std::vector<double>& degrees, double beta) const;

private:
    const DomainGrid& grid_;
    const BoundaryData& bd_;
    std::unique_ptr<LaplaceSolver> solver_;
};

CanonicalMap canonical_map(const std::vector<Point>& points, const std::vector<double>& degrees,
                           const BoundaryData& bd, const DomainGrid& grid);
RenormResult renormalized_energy(const std::vector<Point>& points, const std::vector<double>& degrees,
                                 const BoundaryData& bd, const DomainGrid& grid,
                                 const std::vector<double>& ladder = {});
Point renorm_gradient(const std::vector<Point>& points, const std::vector<double>& degrees,
                      const BoundaryData& bd, const DomainGrid& grid, int j);
double w_beta_omega(const std::vector<Point>& points, const std::vector<double>& degrees,
                    const BoundaryData& bd, const DomainGrid& grid, double beta);

// Unit-disk-style data helper: n/2 points of degree 1/2 each for |d| = n/2.
std::vector<double> half_degrees(int d);

} // namespace ferro
