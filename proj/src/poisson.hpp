#pragma once

#include <vector>

#include "grid.hpp"

namespace axisw {

/// Direct solver for (alpha I - beta L5) x = b, where L5 is the discrete
/// laplacian5 with the same ghost rules. The operator is diagonal in z after
/// an FFT; each of the Nz/2 + 1 modes leaves a tridiagonal system in r that is
/// factored once at construction.
///
/// alpha = 0, beta = 1 is the Poisson problem for psi1. alpha = 1,
/// beta = dt/2 is the Crank-Nicolson diffusion solve.
class ShiftedLaplacianSolver {
public:
    ShiftedLaplacianSolver(const Grid& grid, double alpha, double beta);

    const Grid& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    /// Throws ConfigError on grid mismatch, DataError on non-finite input.
    ScalarField solve(const ScalarField& rhs) const;

private:
    struct ModeFactor {
        std::vector<double> inv_pivot;  // 1 / w_j
        std::vector<double> upper;      // c'_j = sup_j / w_j
    };

    Grid grid_;
    double alpha_;
    double beta_;
    std::vector<double> sub_;  // shared across modes
    std::vector<double> sup_;
    std::vector<ModeFactor> factors_;
};

/// Factorizations for the psi1 Poisson problem -L5 psi1 = w1.
///
/// Not safe for concurrent use from several threads; give each worker its own.
class PoissonWorkspace {
public:
    explicit PoissonWorkspace(const Grid& grid) : solver_(grid, 0.0, 1.0) {}

    const Grid& grid() const { return solver_.grid(); }

    /// Refactor for a different grid; no-op if the grid is unchanged.
    void rebuild(const Grid& grid);

    const ShiftedLaplacianSolver& solver() const { return solver_; }

private:
    ShiftedLaplacianSolver solver_;
};

/// Solves -(psi_zz + psi_rr + 3 psi_r / r) = w1 with periodic z and a
/// Dirichlet far field.
ScalarField solve_psi1(const ScalarField& w1, const PoissonWorkspace& ws);

}  // namespace axisw
