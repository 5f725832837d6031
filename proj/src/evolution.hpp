#pragma once

#include "grid.hpp"
#include "poisson.hpp"
#include "velocity.hpp"

namespace axisw {

/// One snapshot of the reduced system. psi1 and vel are always derived from
/// w1 (Poisson solve, then velocity reconstruction); build states through
/// make_state to keep them consistent.
struct State {
    double t = 0.0;
    ScalarField u1;
    ScalarField w1;
    ScalarField psi1;
    VelocityField vel;

    const Grid& grid() const { return u1.grid(); }

    /// Swirl u^theta = r u1.
    ScalarField u_theta() const { return times_r(u1); }
    /// Angular vorticity w^theta = r w1.
    ScalarField w_theta() const { return times_r(w1); }
    /// Angular stream function psi^theta = r psi1.
    ScalarField psi_theta() const { return times_r(psi1); }
};

/// Solves psi1 from w1 and rebuilds the velocity.
State make_state(double t, ScalarField u1, ScalarField w1, const PoissonWorkspace& ws);

/// Zero state on the workspace grid.
State zero_state(const PoissonWorkspace& ws, double t = 0.0);

enum class Scheme {
    Rk2CrankNicolson,  // Heun for advection/stretching, Crank-Nicolson for diffusion
};

struct StepConfig {
    double dt = 1e-3;
    double cfl_safety = 0.5;
    Scheme scheme = Scheme::Rk2CrankNicolson;

    // Test hook: false drops advection, stretching and the (u1^2)_z source so
    // that only diffusion remains.
    bool explicit_terms = true;
};

/// Advection and stretching part of the u1 equation:
/// -v^r u1_r - v^z u1_z + 2 psi1_z u1.
ScalarField explicit_u1(const State& s);

/// Advection and source part of the w1 equation:
/// -v^r w1_r - v^z w1_z + (u1^2)_z.
ScalarField explicit_w1(const State& s);

/// Full right-hand side of the u1 equation (explicit part + laplacian5).
ScalarField rhs_u1(const State& s);

/// Full right-hand side of the w1 equation (explicit part + laplacian5).
ScalarField rhs_w1(const State& s);

/// min over nodes of (dr / |v^r|, dz / |v^z|); +infinity for a fluid at rest.
double cfl_dt(const State& s);

/// Advances u1 and w1 by cfg.dt, then re-solves psi1 and the velocity.
///
/// Throws CflViolation if cfg.dt > cfl_safety * cfl_dt(s) and BlowUp if the
/// new state has non-finite values.
State step(const State& s, const StepConfig& cfg, const PoissonWorkspace& ws);

}  // namespace axisw
