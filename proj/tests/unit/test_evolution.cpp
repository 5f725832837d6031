#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "evolution.hpp"
#include "test_support.hpp"

using namespace axisw;
using axisw::testing::Gen;
using axisw::testing::kPi;

namespace {

State gaussian_state(const PoissonWorkspace& ws, double amp_u, double amp_w, double width = 1.0) {
    const Grid& g = ws.grid();
    auto shape = [=](double a) {
        return [=](double r, double z) { return a * std::exp(-(r / width) * (r / width)) * std::sin(2.0 * kPi * z); };
    };
    return make_state(0.0, ScalarField::from_function(g, shape(amp_u)), ScalarField::from_function(g, shape(amp_w)), ws);
}

}  // namespace

TEST(Evolution, MakeStateDerivesStreamAndVelocity) {
    const Grid g = make_grid(5.0, 32, 16);
    const PoissonWorkspace ws(g);
    const State s = gaussian_state(ws, 0.3, 0.7);
    EXPECT_LT((s.psi1 - solve_psi1(s.w1, ws)).max_abs(), 1e-15);
    EXPECT_LT((s.vel.vz - compute_velocity(s.psi1).vz).max_abs(), 1e-15);
    EXPECT_LT((s.u_theta() - times_r(s.u1)).max_abs(), 1e-15);
}

TEST(Evolution, RestIsAFixedPoint) {
    const Grid g = make_grid(4.0, 16, 8);
    const PoissonWorkspace ws(g);
    State s = zero_state(ws);
    EXPECT_TRUE(std::isinf(cfl_dt(s)));
    StepConfig cfg;
    cfg.dt = 0.01;
    for (int n = 0; n < 10; ++n) s = step(s, cfg, ws);
    EXPECT_EQ(s.u1.max_abs(), 0.0);
    EXPECT_EQ(s.w1.max_abs(), 0.0);
    EXPECT_NEAR(s.t, 0.1, 1e-15);
}

TEST(Evolution, StepDoesNotMutateItsInput) {
    const Grid g = make_grid(4.0, 16, 8);
    const PoissonWorkspace ws(g);
    const State s = gaussian_state(ws, 0.5, 0.5);
    const std::vector<double> before(s.u1.values().begin(), s.u1.values().end());
    StepConfig cfg;
    cfg.dt = 1e-3;
    const State next = step(s, cfg, ws);
    EXPECT_TRUE(std::equal(before.begin(), before.end(), s.u1.values().begin()));
    EXPECT_EQ(s.t, 0.0);
    EXPECT_DOUBLE_EQ(next.t, 1e-3);
}

TEST(Evolution, DiffusionOnlyDecayRateProperty) {
    // constant-in-r sin(2 pi m z) decays like exp(-(2 pi m)^2 t) near the axis
    const Grid g = make_grid(4.0, 32, 16);
    const PoissonWorkspace ws(g);
    for (int m = 1; m <= 3; ++m) {
        const double k = 2.0 * kPi * m;
        State s = make_state(0.0, ScalarField::from_function(g, [&](double, double z) { return std::sin(k * z); }),
                             ScalarField(g), ws);
        StepConfig cfg;
        cfg.dt = 1e-4;
        cfg.explicit_terms = false;
        const double t_end = 1.0 / (k * k);  // one e-folding
        const int steps = static_cast<int>(std::lround(t_end / cfg.dt));
        for (int n = 0; n < steps; ++n) s = step(s, cfg, ws);
        // sample near the crest of the mode
        const int kmax = g.Nz() / (4 * m);
        EXPECT_NEAR(s.u1(0, kmax) / std::sin(k * g.z(kmax)), std::exp(-k * k * s.t), 2e-3) << "mode " << m;
    }
}

TEST(Evolution, CrankNicolsonIsSecondOrderInTime) {
    const Grid g = make_grid(4.0, 16, 8);
    const PoissonWorkspace ws(g);
    auto run = [&](double dt) {
        State s = make_state(0.0, ScalarField::from_function(g, [](double, double z) { return std::sin(2.0 * kPi * z); }),
                             ScalarField(g), ws);
        StepConfig cfg;
        cfg.dt = dt;
        cfg.explicit_terms = false;
        const int steps = static_cast<int>(std::lround(0.05 / dt));
        for (int n = 0; n < steps; ++n) s = step(s, cfg, ws);
        return s.u1;
    };
    const ScalarField ref = run(1e-5);
    const double e1 = (run(4e-3) - ref).max_abs();
    const double e2 = (run(2e-3) - ref).max_abs();
    EXPECT_GT(e1 / e2, 3.5);
}

TEST(Evolution, ParityIsPreservedProperty) {
    Gen gen(41);
    const Grid g = make_grid(6.0, 48, 16);
    const PoissonWorkspace ws(g);
    for (int trial = 0; trial < 3; ++trial) {
        State s = make_state(0.0, gen.smooth_odd_field(g), gen.smooth_odd_field(g), ws);
        StepConfig cfg;
        for (int n = 0; n < 100; ++n) {
            cfg.dt = std::min(1e-3, 0.5 * cfl_dt(s));
            s = step(s, cfg, ws);
        }
        EXPECT_LT(parity_error(s), 1e-12);
    }
}

TEST(Evolution, RhsSplitsIntoExplicitAndDiffusiveParts) {
    const Grid g = make_grid(5.0, 32, 16);
    const PoissonWorkspace ws(g);
    const State s = gaussian_state(ws, 0.4, 0.9);
    EXPECT_LT((rhs_u1(s) - explicit_u1(s) - laplacian5(s.u1)).max_abs(), 1e-12);
    EXPECT_LT((rhs_w1(s) - explicit_w1(s) - laplacian5(s.w1)).max_abs(), 1e-12);
}

TEST(Evolution, ExplicitTermsOfPureSwirlState) {
    // w1 = 0 gives psi1 = 0 and no velocity: the u1 equation has no explicit part,
    // while the w1 equation is driven by (u1^2)_z.
    const Grid g = make_grid(5.0, 32, 16);
    const PoissonWorkspace ws(g);
    const State s = make_state(0.0, gaussian_state(ws, 1.0, 0.0).u1, ScalarField(g), ws);
    EXPECT_EQ(explicit_u1(s).max_abs(), 0.0);
    EXPECT_LT((explicit_w1(s) - ddz(multiply(s.u1, s.u1))).max_abs(), 1e-14);
}

TEST(Evolution, CflViolationReportsAdvisoryStep) {
    const Grid g = make_grid(4.0, 32, 16);
    const PoissonWorkspace ws(g);
    const State s = gaussian_state(ws, 0.0, 50.0);
    const double limit = cfl_dt(s);
    ASSERT_TRUE(std::isfinite(limit));
    StepConfig cfg;
    cfg.cfl_safety = 0.5;
    cfg.dt = limit;  // above 0.5 * limit
    try {
        step(s, cfg, ws);
        FAIL() << "expected CflViolation";
    } catch (const CflViolation& e) {
        EXPECT_DOUBLE_EQ(e.requested_dt, limit);
        EXPECT_DOUBLE_EQ(e.advisory_dt, 0.5 * limit);
    }
    cfg.dt = 0.5 * limit;
    EXPECT_NO_THROW(step(s, cfg, ws));
}

TEST(Evolution, InvalidStepParameters) {
    const Grid g = make_grid(4.0, 16, 8);
    const PoissonWorkspace ws(g);
    const State s = zero_state(ws);
    StepConfig cfg;
    cfg.dt = 0.0;
    EXPECT_THROW(step(s, cfg, ws), ConfigError);
    cfg.dt = 1e-3;
    cfg.cfl_safety = 1.5;
    EXPECT_THROW(step(s, cfg, ws), ConfigError);
}

TEST(Evolution, OverflowIsReportedAsBlowUp) {
    const Grid g = make_grid(4.0, 16, 8);
    const PoissonWorkspace ws(g);
    // u1^2 overflows in the (u1^2)_z source
    const State s = make_state(0.0, gaussian_state(ws, 1e200, 0.0).u1, ScalarField(g), ws);
    StepConfig cfg;
    cfg.dt = 1e-3;
    try {
        step(s, cfg, ws);
        FAIL() << "expected BlowUp";
    } catch (const BlowUp& e) {
        EXPECT_DOUBLE_EQ(e.time, 1e-3);
    }
}
