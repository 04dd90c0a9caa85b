#pragma once

// Derivative-free minimisation of W + c_beta L over defect positions.

#include "ferro/renorm.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ferro {

struct NelderMeadOptions {
    int max_evals = 1500;
    double f_tol = 1e-7;
    double x_tol = 1e-5;
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0;
    int evals = 0;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& opt = {});

struct StartResult {
    std::vector<Point> initial, points;
    double value = 0;
    int evals = 0;
    bool converged = false;
};

struct OptimizeResult {
    std::vector<Point> points;
    double value = 0;
    std::vector<StartResult> starts;    // sorted by (value, points)
    std::vector<StartResult> local_minima; // distinct up to relabelling
};

// Penalised objective: +inf-like barrier when a point is within `barrier` of the
// boundary or of another point, or when the sigma ladder cannot be built.
double penalised_w_beta(const RenormalizedEnergy& R, const std::vector<Point>& pts, const std::vector<double>& deg,
                        double beta, double barrier);

OptimizeResult optimize_positions(const RenormalizedEnergy& R, int d, double beta, int multistart,
                                  std::uint64_t seed, const NelderMeadOptions& opt = {});

} // namespace ferro
