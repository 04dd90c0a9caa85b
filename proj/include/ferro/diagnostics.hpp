#pragma once

// Interpretation of relaxed states: energy measures, defects, jump sets and
// integral identities.

#include "ferro/solver.hpp"

#include <complex>
#include <vector>

namespace ferro {

struct Defect {
    Point center;
    double degree = 0;
    bool resolved = true;        // degree loop stayed in {|Q| >= 1/2}
    bool touches_boundary = false;
    double core_radius = 0;
    double local_energy = 0;     // mu_eps mass of the 6 eps ball
    int node_count = 0;
};

struct Chain {
    std::vector<Point> points; // polyline through jump-edge midpoints
    bool closed = false;
    double length = 0;
    enum class End { Defect, Boundary, Open };
    End end_a = End::Open, end_b = End::Open;
};

struct JumpSet {
    std::vector<Chain> chains;
    double total_length = 0;
    int edge_count = 0;
    std::vector<Point> edge_midpoints;
};

struct Densities {
    ScalarField mu, nu, zeta;
    std::vector<char> zeta_mask; // 1 where zeta is defined (|Q| >= 1/2)
};

// Node densities; the gradient terms use the edge-consistent form so that their
// h^2-weighted sums reproduce the discrete energy.
Densities energy_densities(const Field& q, const Field& M, const Problem& pb);

ScalarField grad_sq_density(const Field& u, const DomainGrid& grid);

std::vector<Defect> detect_defects(const Field& q, const Problem& pb);
// mu_eps mass of the 6 eps ball around each defect.
void fill_local_energy(std::vector<Defect>& defects, const Field& q, const Field& M, const Problem& pb);

JumpSet jump_set(const Field& M, const Field& q, const Problem& pb, const std::vector<Defect>& defects);

struct PohozaevTerms {
    double lhs = 0, rhs = 0, residual = 0, relative = 0;
};
PohozaevTerms pohozaev_residual(const Field& q, const Field& M, const Problem& pb, const Point& x0, double R);

struct MeasureProfile {
    Point center;
    std::vector<double> radii, values, normalized;
};
MeasureProfile zeta_profile(const Field& q, const Field& M, const Problem& pb, const Point& x0,
                            const std::vector<double>& radii);

// (integral of test * J, pi * sum d_j test(a_j)) with J = curl(j)/2.
std::pair<double, double> jacobian_concentration(const Field& q, const DomainGrid& grid,
                                                 const std::vector<Defect>& defects, const ScalarField& test);

struct HopfFields {
    std::vector<std::complex<double>> omega_Q, omega_M;
    double dbar_relative = 0; // L1(dbar omega_Q) / L1(omega_Q) outside the excluded balls
};
HopfFields hopf_fields(const Field& q, const Field& M, const Problem& pb, const std::vector<Point>& exclude,
                       double exclude_radius);

double discrepancy(const Field& q, const Field& M, const Problem& pb, const Point& x0, double r);

struct NuMass {
    double nu_outside_cores = 0; // nu mass in the tube around the chains, defect balls removed
    double length = 0;           // chain length outside the defect balls
    double tension_times_length = 0;
    double ratio = 0;
};
// Tube and defect-ball radii are in units of eps.
NuMass nu_mass_vs_length(const Field& q, const Field& M, const Problem& pb, const std::vector<Defect>& defects,
                         const JumpSet& js, double tube = 2.0, double exclude = 2.0);

// Symmetric Hausdorff distance between two sampled point sets.
double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);
std::vector<Point> sample_polyline(const std::vector<Point>& pts, double spacing);

} // namespace ferro
