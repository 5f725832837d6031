#include "evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace axisw {

State make_state(double t, ScalarField u1, ScalarField w1, const PoissonWorkspace& ws) {
    require_same_grid(u1, w1, "make_state");
    ScalarField psi1 = solve_psi1(w1, ws);
    VelocityField vel = compute_velocity(psi1);
    return State{t, std::move(u1), std::move(w1), std::move(psi1), std::move(vel)};
}

State zero_state(const PoissonWorkspace& ws, double t) {
    return make_state(t, ScalarField(ws.grid()), ScalarField(ws.grid()), ws);
}

namespace {

// -v^r f_r - v^z f_z
ScalarField advection(const State& s, const ScalarField& f) {
    ScalarField out = multiply(s.vel.vr, ddr(f));
    out += multiply(s.vel.vz, ddz(f));
    out *= -1.0;
    return out;
}

}  // namespace

ScalarField explicit_u1(const State& s) {
    ScalarField out = advection(s, s.u1);
    out.axpy(2.0, multiply(ddz(s.psi1), s.u1));
    return out;
}

ScalarField explicit_w1(const State& s) {
    ScalarField out = advection(s, s.w1);
    out += ddz(multiply(s.u1, s.u1));
    return out;
}

ScalarField rhs_u1(const State& s) { return explicit_u1(s) + laplacian5(s.u1); }

ScalarField rhs_w1(const State& s) { return explicit_w1(s) + laplacian5(s.w1); }

double cfl_dt(const State& s) {
    const Grid& g = s.grid();
    const double vr_max = s.vel.vr.max_abs();
    const double vz_max = s.vel.vz.max_abs();
    double dt = std::numeric_limits<double>::infinity();
    if (vr_max > 0.0) dt = std::min(dt, g.dr() / vr_max);
    if (vz_max > 0.0) dt = std::min(dt, g.dz() / vz_max);
    return dt;
}

State step(const State& s, const StepConfig& cfg, const PoissonWorkspace& ws) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("step: dt must be positive and finite");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) throw ConfigError("step: cfl_safety must be in (0, 1]");

    const double dt = cfg.dt;
    const double limit = cfg.cfl_safety * cfl_dt(s);
    if (dt > limit) throw CflViolation(dt, limit);

    const ShiftedLaplacianSolver implicit(s.grid(), 1.0, 0.5 * dt);

    // Explicit-part contributions at t^n. Diffusion enters as dt/2 L f^n on the
    // right and (I - dt/2 L) on the left in both stages.
    const ScalarField lu = laplacian5(s.u1);
    const ScalarField lw = laplacian5(s.w1);
    ScalarField base_u = s.u1;
    base_u.axpy(0.5 * dt, lu);
    ScalarField base_w = s.w1;
    base_w.axpy(0.5 * dt, lw);

    const double t_new = s.t + dt;
    auto solve_stage = [&](const ScalarField& rhs_u, const ScalarField& rhs_w) {
        if (!rhs_u.all_finite() || !rhs_w.all_finite()) throw BlowUp(t_new);
        return make_state(t_new, implicit.solve(rhs_u), implicit.solve(rhs_w), ws);
    };

    if (!cfg.explicit_terms) return solve_stage(base_u, base_w);

    const ScalarField nu0 = explicit_u1(s);
    const ScalarField nw0 = explicit_w1(s);

    ScalarField rhs_u = base_u;
    rhs_u.axpy(dt, nu0);
    ScalarField rhs_w = base_w;
    rhs_w.axpy(dt, nw0);
    const State predicted = solve_stage(rhs_u, rhs_w);

    rhs_u = base_u;
    rhs_u.axpy(0.5 * dt, nu0);
    rhs_u.axpy(0.5 * dt, explicit_u1(predicted));
    rhs_w = base_w;
    rhs_w.axpy(0.5 * dt, nw0);
    rhs_w.axpy(0.5 * dt, explicit_w1(predicted));
    State next = solve_stage(rhs_u, rhs_w);

    if (!next.u1.all_finite() || !next.w1.all_finite() || !next.psi1.all_finite()) throw BlowUp(t_new);
    return next;
}

}  // namespace axisw
