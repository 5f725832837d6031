#include <gtest/gtest.h>

#include <cmath>

#include "errors.hpp"
#include "grid.hpp"
#include "spectral.hpp"
#include "test_support.hpp"

using namespace axisw;
using axisw::testing::Gen;
using axisw::testing::kPi;

TEST(Grid, NodesAreCellCentered) {
    const Grid g = make_grid(4.0, 8, 4);
    EXPECT_DOUBLE_EQ(g.dr(), 0.5);
    EXPECT_DOUBLE_EQ(g.dz(), 0.25);
    EXPECT_DOUBLE_EQ(g.r(0), 0.25);
    EXPECT_DOUBLE_EQ(g.r(7), 3.75);
    EXPECT_DOUBLE_EQ(g.z(3), 0.75);
    EXPECT_EQ(g.size(), 32u);
}

TEST(Grid, MirrorMapsZOntoOneMinusZ) {
    const Grid g = make_grid(1.0, 4, 8);
    EXPECT_EQ(g.mirror_z(0), 0);
    EXPECT_EQ(g.mirror_z(1), 7);
    EXPECT_EQ(g.mirror_z(4), 4);
    for (int k = 0; k < g.Nz(); ++k) EXPECT_EQ(g.mirror_z(g.mirror_z(k)), k);
}

TEST(Grid, RejectsBadParameters) {
    EXPECT_THROW(make_grid(0.0, 8, 8), ConfigError);
    EXPECT_THROW(make_grid(-1.0, 8, 8), ConfigError);
    EXPECT_THROW(make_grid(1.0, 3, 8), ConfigError);
    EXPECT_THROW(make_grid(1.0, 8, 2), ConfigError);
    EXPECT_THROW(make_grid(1.0, 8, 7), ConfigError);
    EXPECT_NO_THROW(make_grid(1.0, 4, 4));
}

TEST(ScalarField, ArithmeticAndMismatch) {
    const Grid g = make_grid(1.0, 4, 4);
    ScalarField a = ScalarField::from_function(g, [](double r, double z) { return r + z; });
    ScalarField b = ScalarField::from_function(g, [](double r, double) { return 2.0 * r; });
    const ScalarField c = a + b;
    const ScalarField d = 2.0 * a - b;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            EXPECT_DOUBLE_EQ(c(j, k), 3.0 * g.r(j) + g.z(k));
            EXPECT_DOUBLE_EQ(d(j, k), 2.0 * g.z(k));
        }
    a.axpy(-1.0, a);
    EXPECT_EQ(a.max_abs(), 0.0);

    const ScalarField other(make_grid(2.0, 4, 4));
    EXPECT_THROW(a += other, ConfigError);
    EXPECT_THROW(multiply(a, other), ConfigError);
    EXPECT_THROW(ScalarField(g, std::vector<double>(5)), ConfigError);
}

TEST(ScalarField, FinitenessAndMaxAbs) {
    const Grid g = make_grid(1.0, 4, 4);
    ScalarField f(g);
    EXPECT_TRUE(f.all_finite());
    f(2, 3) = -7.5;
    EXPECT_EQ(f.max_abs(), 7.5);
    f(1, 1) = std::nan("");
    EXPECT_FALSE(f.all_finite());
}

TEST(Spectral, RoundTripProperty) {
    Gen gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid g = make_grid(gen.uniform(0.5, 5.0), gen.integer(4, 20), 2 * gen.integer(2, 32));
        const ScalarField f = gen.noise(g);
        const ScalarField back = backward_z(forward_z(f), g);
        EXPECT_LT((back - f).max_abs(), 1e-13);
    }
}

TEST(Derivatives, SpectralZIsExactForResolvedModes) {
    const Grid g = make_grid(2.0, 6, 16);
    for (int m = 1; m < 8; ++m) {
        const double k = 2.0 * kPi * m;
        const ScalarField f = ScalarField::from_function(g, [&](double r, double z) { return r * std::sin(k * z); });
        const ScalarField fz = ddz(f);
        const ScalarField fzz = d2dz2(f);
        for (int j = 0; j < g.Nr(); ++j)
            for (int kk = 0; kk < g.Nz(); ++kk) {
                EXPECT_NEAR(fz(j, kk), g.r(j) * k * std::cos(k * g.z(kk)), 1e-11 * k);
                EXPECT_NEAR(fzz(j, kk), -g.r(j) * k * k * std::sin(k * g.z(kk)), 1e-10 * k * k);
            }
    }
}

TEST(Derivatives, NyquistModeHandling) {
    // cos(pi Nz z) alternates +-1 on the grid: first derivative drops it, second keeps -(pi Nz)^2.
    const Grid g = make_grid(1.0, 4, 8);
    const ScalarField f = ScalarField::from_function(g, [](double, double z) { return std::cos(8.0 * kPi * z); });
    EXPECT_LT(ddz(f).max_abs(), 1e-12);
    const ScalarField fzz = d2dz2(f);
    const double k2 = std::pow(8.0 * kPi, 2);
    for (int kk = 0; kk < 8; ++kk) EXPECT_NEAR(fzz(0, kk), -k2 * f(0, kk), 1e-9 * k2);
}

TEST(Derivatives, RadialDerivativeIsSecondOrder) {
    auto err = [](int Nr) {
        const Grid g = make_grid(6.0, Nr, 4);
        const ScalarField f = ScalarField::from_function(g, [](double r, double) { return std::exp(-r * r); });
        const ScalarField fr = ddr(f);
        double e = 0.0;
        for (int j = 0; j < Nr; ++j) e = std::max(e, std::abs(fr(j, 0) + 2.0 * g.r(j) * std::exp(-g.r(j) * g.r(j))));
        return e;
    };
    const double e1 = err(32);
    const double e2 = err(64);
    const double e3 = err(128);
    EXPECT_GT(e1 / e2, 3.5);
    EXPECT_GT(e2 / e3, 3.5);
}

TEST(Laplacian5, QuadraticGivesEight) {
    const Grid g = make_grid(3.0, 40, 8);
    const ScalarField lap = laplacian5(ScalarField::from_function(g, [](double r, double) { return r * r; }));
    for (int j = 0; j < g.Nr() - 1; ++j)
        for (int k = 0; k < g.Nz(); ++k) EXPECT_NEAR(lap(j, k), 8.0, 1e-10);
}

TEST(Laplacian5, ConstantIsHarmonicAwayFromTheOuterBoundary) {
    const Grid g = make_grid(3.0, 16, 8);
    const ScalarField lap = radial_laplacian5(ScalarField::from_function(g, [](double, double) { return 1.0; }));
    for (int j = 0; j < g.Nr() - 1; ++j) EXPECT_NEAR(lap(j, 0), 0.0, 1e-12);
    EXPECT_LT(lap(g.Nr() - 1, 0), 0.0);  // Dirichlet ghost pulls the last row down
}

TEST(Laplacian5, AdditiveSplitProperty) {
    Gen gen(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Grid g = make_grid(gen.uniform(1.0, 5.0), gen.integer(4, 24), 2 * gen.integer(2, 12));
        const ScalarField f = gen.noise(g);
        const ScalarField split = radial_laplacian5(f) + d2dz2(f);
        EXPECT_LT((laplacian5(f) - split).max_abs(), 1e-9 * (1.0 + laplacian5(f).max_abs()));
    }
}

TEST(Quadrature, WeightedIntegralOfOneIsHalfRSquared) {
    // midpoint rule is exact for the linear weight r
    const Grid g = make_grid(2.5, 7, 4);
    const ScalarField one = ScalarField::from_function(g, [](double, double) { return 1.0; });
    EXPECT_NEAR(weighted_integral(one), 2.5 * 2.5 / 2.0, 1e-14);
}

TEST(Quadrature, LpNormHomogeneityProperty) {
    Gen gen(17);
    const Grid g = make_grid(3.0, 16, 8);
    for (int trial = 0; trial < 20; ++trial) {
        const ScalarField f = gen.noise(g);
        const double m = gen.uniform(1.0, 16.0);
        const double s = gen.log_uniform(1e-3, 1e3);
        EXPECT_NEAR(weighted_lp_norm(s * f, m), s * weighted_lp_norm(f, m), 1e-12 * s * weighted_lp_norm(f, m));
    }
    EXPECT_THROW(weighted_lp_norm(ScalarField(g), 0.5), ConfigError);
    EXPECT_EQ(weighted_lp_norm(ScalarField(g), 4.0), 0.0);
}

TEST(Quadrature, LpNormOfGaussianSine) {
    // m = 2: int e^{-2 r^2} sin^2(2 pi z) r dr dz = 1/8 on the full half-line
    const Grid g = make_grid(6.0, 400, 16);
    const ScalarField f =
        ScalarField::from_function(g, [](double r, double z) { return std::exp(-r * r) * std::sin(2.0 * kPi * z); });
    EXPECT_NEAR(weighted_lp_norm(f, 2.0), std::sqrt(1.0 / 8.0), 1e-5);
}

TEST(Parity, OddIsZeroAndCosineIsTwo) {
    const Grid g = make_grid(1.0, 4, 16);
    EXPECT_LT(
        z_parity_error(ScalarField::from_function(g, [](double r, double z) { return r * std::sin(2.0 * kPi * z); })),
        1e-15);
    EXPECT_NEAR(z_parity_error(ScalarField::from_function(g, [](double, double z) { return std::cos(2.0 * kPi * z); })),
                2.0, 1e-14);
}

TEST(Parity, DerivativesPreserveParityProperty) {
    Gen gen(23);
    for (int trial = 0; trial < 10; ++trial) {
        const Grid g = make_grid(gen.uniform(2.0, 6.0), gen.integer(8, 32), 2 * gen.integer(4, 16));
        const ScalarField f = gen.smooth_odd_field(g);
        EXPECT_LT(z_parity_error(ddr(f)), 1e-12);
        EXPECT_LT(z_parity_error(d2dz2(f)), 1e-10);
        EXPECT_LT(z_parity_error(laplacian5(f)), 1e-9);
    }
}
