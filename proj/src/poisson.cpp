#include "poisson.hpp"

#include <complex>

#include "errors.hpp"
#include "spectral.hpp"

namespace axisw {

ShiftedLaplacianSolver::ShiftedLaplacianSolver(const Grid& grid, double alpha, double beta)
    : grid_(grid), alpha_(alpha), beta_(beta) {
    const int Nr = grid.Nr();
    const double inv_dr2 = 1.0 / (grid.dr() * grid.dr());
    const double inv2dr = 0.5 / grid.dr();

    // Radial stencil of L5: lower a_j, centre -2/dr^2, upper b_j.
    std::vector<double> radial_diag(Nr, -2.0 * inv_dr2);
    sub_.assign(Nr, 0.0);
    sup_.assign(Nr, 0.0);
    for (int j = 0; j < Nr; ++j) {
        const double c = 3.0 / grid.r(j) * inv2dr;
        const double lower = inv_dr2 - c;
        const double upper = inv_dr2 + c;
        if (j == 0)
            radial_diag[0] += lower;  // ghost at -dr/2 mirrors row 0
        else
            sub_[j] = -beta * lower;
        if (j + 1 < Nr) sup_[j] = -beta * upper;  // ghost at R + dr/2 is zero
    }

    const int modes = grid.Nz() / 2 + 1;
    factors_.resize(modes);
    for (int k = 0; k < modes; ++k) {
        const double shift = alpha + beta * wavenumber(k) * wavenumber(k);
        ModeFactor& f = factors_[k];
        f.inv_pivot.resize(Nr);
        f.upper.resize(Nr);
        double prev_upper = 0.0;
        for (int j = 0; j < Nr; ++j) {
            const double w = shift - beta * radial_diag[j] - sub_[j] * prev_upper;
            if (w == 0.0) throw ConfigError("shifted Laplacian: singular mode system");
            f.inv_pivot[j] = 1.0 / w;
            f.upper[j] = sup_[j] / w;
            prev_upper = f.upper[j];
        }
    }
}

ScalarField ShiftedLaplacianSolver::solve(const ScalarField& rhs) const {
    if (!(rhs.grid() == grid_)) throw ConfigError("shifted Laplacian solve: grid mismatch");
    if (!rhs.all_finite()) throw DataError("shifted Laplacian solve: non-finite right-hand side");

    ZSpectrum s = forward_z(rhs);
    const int Nr = grid_.Nr();
    std::vector<std::complex<double>> x(Nr);
    for (int k = 0; k < s.modes(); ++k) {
        const ModeFactor& f = factors_[k];
        std::complex<double> prev = 0.0;
        for (int j = 0; j < Nr; ++j) {
            prev = (s.at(j, k) - sub_[j] * prev) * f.inv_pivot[j];
            x[j] = prev;
        }
        for (int j = Nr - 2; j >= 0; --j) x[j] -= f.upper[j] * x[j + 1];
        for (int j = 0; j < Nr; ++j) s.at(j, k) = x[j];
    }
    return backward_z(s, grid_);
}

void PoissonWorkspace::rebuild(const Grid& grid) {
    if (grid == solver_.grid()) return;
    solver_ = ShiftedLaplacianSolver(grid, 0.0, 1.0);
}

ScalarField solve_psi1(const ScalarField& w1, const PoissonWorkspace& ws) {
    if (!(w1.grid() == ws.grid())) throw ConfigError("solve_psi1: vorticity grid does not match workspace");
    return ws.solver().solve(w1);
}

}  // namespace axisw
