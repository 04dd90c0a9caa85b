#include "ferro/laplace.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace ferro {

struct LaplaceSolver::Factor {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

LaplaceSolver::LaplaceSolver(const DomainGrid& grid, Method method, double cg_tol)
    : grid_(grid), method_(method), cg_tol_(cg_tol)
{
    const auto& inner = grid.interior_nodes();
    unknown_.assign(grid.size(), -1);
    for (std::size_t k = 0; k < inner.size(); ++k)
        unknown_[inner[k]] = static_cast<int>(k);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(inner.size() * 5);
    for (std::size_t k = 0; k < inner.size(); ++k) {
        trip.emplace_back(k, k, 4.0);
        for (int b : grid.neighbours(inner[k]))
            if (b >= 0 && unknown_[b] >= 0)
                trip.emplace_back(k, unknown_[b], -1.0);
    }
    const int n = static_cast<int>(inner.size());
    A_.resize(n, n);
    A_.setFromTriplets(trip.begin(), trip.end());
    if (method_ == Method::Cholesky) {
        factor_ = std::make_unique<Factor>();
        factor_->ldlt.compute(A_);
        if (factor_->ldlt.info() != Eigen::Success)
            throw NumericError("Laplace factorisation failed");
    }
}

LaplaceSolver::~LaplaceSolver() = default;

Field LaplaceSolver::solve(const Field& bv, int* cg_iterations) const
{
    const auto& inner = grid_.interior_nodes();
    const int n = static_cast<int>(inner.size());
    const int cols = static_cast<int>(bv.cols());
    Field out = Field::Zero(grid_.size(), cols);
    const auto& bn = grid_.boundary();
    for (std::size_t k = 0; k < bn.size(); ++k)
        out.row(bn[k].id) = bv.row(k);
    for (int c = 0; c < cols; ++c) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n; ++k)
            for (int b : grid_.neighbours(inner[k]))
                if (b >= 0 && unknown_[b] < 0)
                    rhs(k) += out(b, c);
        Eigen::VectorXd x;
        if (method_ == Method::Cholesky) {
            x = factor_->ldlt.solve(rhs);
        } else {
            Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
            cg.setTolerance(cg_tol_);
            cg.setMaxIterations(20 * n + 100);
            cg.compute(A_);
            x = cg.solve(rhs);
            if (cg.info() != Eigen::Success)
                throw NumericError("Laplace CG did not converge");
            if (cg_iterations)
                *cg_iterations = static_cast<int>(cg.iterations());
        }
        for (int k = 0; k < n; ++k)
            out(inner[k], c) = x(k);
    }
    return out;
}

} // namespace ferro
