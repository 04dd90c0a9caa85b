#pragma once

// Discrete Dirichlet problem -Lap_h u = 0 at interior nodes, u prescribed on boundary nodes.

#include "ferro/grid.hpp"

#include <Eigen/Sparse>

#include <memory>

namespace ferro {

class LaplaceSolver {
public:
    enum class Method { ConjugateGradient, Cholesky };

    explicit LaplaceSolver(const DomainGrid& grid, Method method = Method::Cholesky, double cg_tol = 1e-12);
    ~LaplaceSolver();

    // boundary values per boundary node (one row each, any number of columns).
    Field solve(const Field& boundary_values, int* cg_iterations = nullptr) const;

private:
    const DomainGrid& grid_;
    Method method_;
    double cg_tol_;
    std::vector<int> unknown_; // lattice id -> unknown index, -1 otherwise
    Eigen::SparseMatrix<double> A_;
    struct Factor;
    std::unique_ptr<Factor> factor_;
};

} // namespace ferro
