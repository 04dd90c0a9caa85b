#pragma once

// Orchestration behind the command line tool. Each run validates its config
// before touching the output directory, then writes the resolved config, its
// artifacts and report.json there.

#include "ferro/io.hpp"
#include "ferro/optimize.hpp"

#include <memory>

namespace ferro {

inline constexpr const char* kVersion = "0.3.0";

// Domain, grid, boundary data and constants for one (eps, h).
class Setup {
public:
    Setup(const RunConfig& c, double eps, double h);
    Setup(const Setup&) = delete;
    Setup& operator=(const Setup&) = delete;

    const DomainGrid& grid() const { return *grid_; }
    const BoundaryData& bd() const { return bd_; }
    const Problem& problem() const { return *pb_; }

private:
    std::unique_ptr<DomainGrid> grid_;
    BoundaryData bd_;
    std::unique_ptr<Problem> pb_;
};

struct Analysis {
    EnergyReport energies;
    std::vector<Defect> defects;
    JumpSet jumps;
    NuMass nu;
    double max_q = 0, max_M2 = 0;
};
Analysis analyse(const Field& q, const Field& M, const Problem& pb);

// Centre for measure profiles: the defect end of the first chain that has one,
// else the chain midpoint, else the domain centroid.
Point jump_anchor(const JumpSet& js, const Domain& domain);

// Least-squares slope of y against x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y);

// Largest matched distance between two equal-size point sets, minimised over
// relabellings and, when rotate is set, rotations about `center`.
double matched_distance(const std::vector<Point>& a, const std::vector<Point>& b, bool rotate,
                        const Point& center = Point::Zero(), double* angle = nullptr);

// True when the boundary datum is invariant under rotations (disk, degree 1).
bool rotation_zero_mode(const RunConfig& c);

json run_relax(const RunConfig& c);
json run_diagnose(const RunConfig& c);
json run_connect(const RunConfig& c);
json run_renorm(const RunConfig& c);
json run_optimize(const RunConfig& c);
json run_sweep(const RunConfig& c);
json run_crosscheck(const RunConfig& c);
// Fast invariant checks; report["pass"] summarises.
json run_selftest(std::uint64_t seed = 7);

} // namespace ferro
