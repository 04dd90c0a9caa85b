#pragma once

// Energy of the radial degree-one vortex on the unit disk,
//   gamma(eps) = min  int_B1 |grad u|^2 / 2 + (|u|^2 - 1)^2 / (4 eps^2),  u = x on the circle,
// and its finite part gamma(eps) - pi |log eps|.

#include <vector>

namespace ferro {

struct RadialProfile {
    double eps = 0;
    std::vector<double> r, f;
    double energy = 0;
    int newton_iterations = 0;
};

// Newton on the discretised radial energy; nodes = 0 picks max(4000, 80 / eps).
RadialProfile radial_vortex(double eps, int nodes = 0);

struct CoreEnergyResult {
    std::vector<double> eps, gamma, finite_part; // finite_part = gamma - pi |log eps|
    double gamma_star = 0; // extrapolated in eps^2 from the two finest values
    double spread = 0;     // relative gap of the finite part between the two finest values
};

CoreEnergyResult core_energy(std::vector<double> eps_ladder, int nodes = 0);

} // namespace ferro
