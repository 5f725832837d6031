#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "riesz.hpp"
#include "test_support.hpp"

using namespace axisw;
using axisw::testing::Gen;
using axisw::testing::kPi;

TEST(ApConstant, UnitWeightGivesOne) {
    for (double c : {0.0, 0.3, 1.0, 5.0})
        for (double radius : {0.1, 1.0, 10.0}) EXPECT_NEAR(ap_constant(0.0, 3.0, c, radius).value, 1.0, 1e-12);
}

TEST(ApConstant, AxisCenteredClosedForm) {
    // alpha = 2, p = 2: (int r^-2)(int r^2) / |B|^2 over the unit 5D ball = (2/3)(16/105)/(4/15)^2
    const ApEstimate e = ap_constant(2.0, 2.0, 0.0, 1.0);
    EXPECT_NEAR(e.value, 10.0 / 7.0, 1e-9);
    EXPECT_DOUBLE_EQ(e.p_conj, 2.0);
    EXPECT_EQ(e.alpha, 2.0);
    EXPECT_EQ(e.ball_radius, 1.0);
}

TEST(ApConstant, ScaleInvarianceProperty) {
    Gen gen(89);
    for (int trial = 0; trial < 12; ++trial) {
        const double p = gen.uniform(1.5, 4.0);
        const double pc = p / (p - 1.0);
        const double alpha = gen.uniform(0.0, std::min(3.9, 3.9 * p / pc));
        const double radius = gen.log_uniform(0.05, 5.0);
        const double center = radius * gen.uniform(0.0, 4.0);
        const double lambda = gen.log_uniform(0.01, 100.0);
        const double a = ap_constant(alpha, p, center, radius).value;
        const double b = ap_constant(alpha, p, lambda * center, lambda * radius).value;
        EXPECT_NEAR(a, b, 1e-6 * a) << "alpha " << alpha << " p " << p;
        EXPECT_GE(a, 1.0 - 1e-10);
        EXPECT_NEAR(pc * (p - 1.0), p, 1e-14);
    }
}

TEST(ApConstant, FarFromAxisApproachesOne) {
    // the weight is nearly constant on a small ball far from the axis
    EXPECT_NEAR(ap_constant(3.0, 2.0, 1000.0, 1.0).value, 1.0, 1e-5);
}

TEST(ApConstant, RejectsInvalidArguments) {
    EXPECT_THROW(ap_constant(-0.1, 2.0, 0.0, 1.0), ConfigError);
    EXPECT_THROW(ap_constant(4.0, 2.0, 0.0, 1.0), ConfigError);
    EXPECT_THROW(ap_constant(1.0, 1.0, 0.0, 1.0), ConfigError);
    EXPECT_THROW(ap_constant(3.0, 1.5, 0.0, 1.0), ConfigError);  // alpha p'/p = 6
    EXPECT_THROW(ap_constant(1.0, 2.0, 0.0, 0.0), ConfigError);
    EXPECT_THROW(ap_constant(1.0, 2.0, -1.0, 1.0), ConfigError);
}

TEST(ApSupremum, SampleSetsAndRefinement) {
    const ApSampleSpec spec = default_ap_samples();
    EXPECT_EQ(spec.radii, (std::vector<double>{0.1, 1.0, 10.0}));
    EXPECT_EQ(spec.offset_factors, (std::vector<double>{0.0, 0.5, 1.0, 2.0, 4.0, 8.0}));
    const ApSampleSpec fine = refine(spec);
    EXPECT_EQ(fine.radii.size(), 5u);
    EXPECT_EQ(fine.offset_factors.size(), 11u);  // 6 + 4 midpoints between non-zero offsets + one below them
    EXPECT_TRUE(std::is_sorted(fine.offset_factors.begin(), fine.offset_factors.end()));
    EXPECT_NEAR(fine.radii[1], std::sqrt(0.1), 1e-15);

    EXPECT_NEAR(ap_supremum(0.0, 2.0, spec), 1.0, 1e-12);
    const double coarse = ap_supremum(2.0, 2.0, spec);
    EXPECT_GE(coarse, 10.0 / 7.0 - 1e-9);
    EXPECT_NEAR(ap_supremum(2.0, 2.0, fine), coarse, 0.05 * coarse);
}

TEST(CzwRatio, ManufacturedPair) {
    // w = (8 + 4 pi^2 - 4 r^2) e^{-r^2} sin, psi = e^{-r^2} sin, psi_zz = -4 pi^2 psi
    const Grid g = make_grid(6.0, 256, 32);
    const PoissonWorkspace ws(g);
    const ScalarField w = ScalarField::from_function(g, [](double r, double z) {
        return (8.0 + 4.0 * kPi * kPi - 4.0 * r * r) * std::exp(-r * r) * std::sin(2.0 * kPi * z);
    });
    const ScalarField psi_zz = ScalarField::from_function(
        g, [](double r, double z) { return -4.0 * kPi * kPi * std::exp(-r * r) * std::sin(2.0 * kPi * z); });
    for (double p : {2.0, 4.0, 8.0}) {
        const double oracle = weighted_lp_norm(psi_zz, p) / weighted_lp_norm(w, p);
        EXPECT_NEAR(czw_ratio(w, p, ws), oracle, 1e-3 * oracle) << "p " << p;
    }
}

TEST(CzwRatio, HomogeneityAndShiftInvarianceProperty) {
    Gen gen(97);
    const Grid g = make_grid(6.0, 48, 16);
    const PoissonWorkspace ws(g);
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField w = gen.smooth_odd_field(g);
        const double p = gen.uniform(1.5, 10.0);
        const double base = czw_ratio(w, p, ws);
        const double c = gen.uniform(0.1, 10.0) * (trial % 2 ? -1.0 : 1.0);
        EXPECT_NEAR(czw_ratio(c * w, p, ws), base, 1e-12 * base);

        const int shift = gen.integer(1, g.Nz() - 1);
        ScalarField shifted(g);
        for (int j = 0; j < g.Nr(); ++j)
            for (int k = 0; k < g.Nz(); ++k) shifted(j, (k + shift) % g.Nz()) = w(j, k);
        EXPECT_NEAR(czw_ratio(shifted, p, ws), base, 1e-11 * base);
    }
}

TEST(CzwRatio, HighModesApproachOneFromBelow) {
    const Grid g = make_grid(6.0, 128, 64);
    const PoissonWorkspace ws(g);
    double prev = 0.0;
    for (int k : {1, 4, 16}) {
        const ScalarField w = ScalarField::from_function(
            g, [=](double r, double z) { return std::exp(-r * r) * std::sin(2.0 * kPi * k * z); });
        const double ratio = czw_ratio(w, 4.0, ws);
        EXPECT_GT(ratio, prev);
        EXPECT_LT(ratio, 1.0);
        prev = ratio;
    }
    EXPECT_GT(prev, 0.95);
}

TEST(CzwRatio, Errors) {
    const Grid g = make_grid(4.0, 16, 8);
    const PoissonWorkspace ws(g);
    EXPECT_THROW(czw_ratio(ScalarField(g), 2.0, ws), UndefinedError);
    Gen gen(5);
    EXPECT_THROW(czw_ratio(gen.smooth_odd_field(g), 1.0, ws), ConfigError);
}

TEST(RandomVorticity, DeterministicAndZOdd) {
    const auto a = random_vorticities(5, 42);
    const auto b = random_vorticities(5, 42);
    const auto c = random_vorticities(5, 43);
    const Grid g = make_grid(6.0, 32, 16);
    ASSERT_EQ(a.size(), 5u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const ScalarField fa = a[i].sample(g);
        EXPECT_EQ((fa - b[i].sample(g)).max_abs(), 0.0);
        EXPECT_GT((fa - c[i].sample(g)).max_abs(), 0.0);
        EXPECT_LT(z_parity_error(fa), 1e-13);
        EXPECT_GT(fa.max_abs(), 0.0);
        EXPECT_NEAR(a[i](1.3, 0.2), -a[i](1.3, 0.8), 1e-13);
    }
    EXPECT_TRUE(random_vorticities(0, 1).empty());
}

TEST(CzwSurvey, EmptyAndThreadIndependent) {
    const Grid coarse = make_grid(6.0, 32, 16);
    const Grid fine = make_grid(6.0, 64, 32);
    const SurveyReport none = czw_survey(0, 7, coarse, fine, 8.0);
    EXPECT_TRUE(none.samples.empty());
    EXPECT_EQ(none.max_coarse, 0.0);

    const SurveyReport one = czw_survey(6, 7, coarse, fine, 8.0, 1);
    const SurveyReport three = czw_survey(6, 7, coarse, fine, 8.0, 3);
    ASSERT_EQ(one.samples.size(), 6u);
    ASSERT_EQ(three.samples.size(), 6u);
    double max_c = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(one.samples[i].index, i);
        EXPECT_EQ(one.samples[i].ratio_coarse, three.samples[i].ratio_coarse);
        EXPECT_EQ(one.samples[i].ratio_fine, three.samples[i].ratio_fine);
        max_c = std::max(max_c, one.samples[i].ratio_coarse);
    }
    EXPECT_EQ(one.max_coarse, max_c);
    EXPECT_EQ(one.max_fine, three.max_fine);

    // sample i is the i-th field of the seeded sequence
    const auto fields = random_vorticities(6, 7);
    EXPECT_EQ(one.samples[4].ratio_coarse, czw_ratio(fields[4].sample(coarse), 8.0, PoissonWorkspace(coarse)));
}

TEST(CzwSurvey, CsvLayout) {
    SurveyReport r;
    r.samples = {{0, 0.5, 0.25}, {1, 0.75, 0.5}};
    r.max_coarse = 0.75;
    r.max_fine = 0.5;
    std::ostringstream out;
    write_survey_csv(r, out);
    EXPECT_EQ(out.str(), "sample,ratio_coarse,ratio_fine\n0,0.5,0.25\n1,0.75,0.5\nmax,0.75,0.5\n");
}
