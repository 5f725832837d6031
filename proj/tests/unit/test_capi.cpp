#include <gtest/gtest.h>

#include <axisw/axisw.h>

#include <cmath>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace {

struct Sim {
    axisw_grid* grid = nullptr;
    axisw_sim* sim = nullptr;
    ~Sim() {
        axisw_sim_destroy(sim);
        axisw_grid_destroy(grid);
    }
};

}  // namespace

TEST(CApi, CreateStepReport) {
    Sim s;
    ASSERT_EQ(axisw_grid_create(6.0, 24, 16, &s.grid), AXISW_OK);
    axisw_init_params params;
    axisw_init_params_default(&params);
    EXPECT_EQ(params.family, AXISW_DATA1);
    EXPECT_EQ(params.p, 8.0);
    params.epsilon = 0.5;
    ASSERT_EQ(axisw_sim_create(s.grid, &params, 1.0, 1.0, &s.sim), AXISW_OK) << axisw_last_error();
    EXPECT_EQ(axisw_sim_time(s.sim), 0.0);

    axisw_norm_report r0;
    ASSERT_EQ(axisw_sim_report(s.sim, &r0), AXISW_OK);
    EXPECT_GT(r0.norm_u1_2p, 0.0);
    EXPECT_NEAR(r0.f_L2, std::pow(r0.norm_u1_2p, 8.0), 1e-10 * r0.f_L2);

    double cfl = 0.0;
    ASSERT_EQ(axisw_sim_cfl_dt(s.sim, &cfl), AXISW_OK);
    EXPECT_GT(cfl, 0.0);
    for (int n = 0; n < 5; ++n) ASSERT_EQ(axisw_sim_step(s.sim, 0.0, 0.5), AXISW_OK);
    axisw_norm_report r1;
    ASSERT_EQ(axisw_sim_report(s.sim, &r1), AXISW_OK);
    EXPECT_GT(r1.t, 0.0);
    EXPECT_EQ(r1.t, axisw_sim_time(s.sim));
    EXPECT_GT(r1.dt_used, 0.0);
    EXPECT_LT(r1.parity_error, 1e-12);

    std::vector<double> u1(24 * 16);
    ASSERT_EQ(axisw_sim_copy_field(s.sim, AXISW_FIELD_U1, u1.data(), u1.size()), AXISW_OK);
    EXPECT_NE(u1[3 * 16 + 4], 0.0);
    EXPECT_EQ(axisw_sim_copy_field(s.sim, AXISW_FIELD_PSI1, u1.data(), u1.size() - 1), AXISW_ERR_CONFIG);
    EXPECT_NE(std::string(axisw_last_error()).find("buffer"), std::string::npos);
}

TEST(CApi, CheckpointRoundTrip) {
    const auto dir = axisw::testing::scratch_dir();
    const std::string path = (dir / "c.bin").string();
    Sim a;
    ASSERT_EQ(axisw_grid_create(6.0, 16, 8, &a.grid), AXISW_OK);
    axisw_init_params params;
    axisw_init_params_default(&params);
    ASSERT_EQ(axisw_sim_create(a.grid, &params, 1.0, 1.0, &a.sim), AXISW_OK);
    ASSERT_EQ(axisw_sim_step(a.sim, 1e-4, 0.5), AXISW_OK);
    ASSERT_EQ(axisw_sim_write_checkpoint(a.sim, path.c_str()), AXISW_OK);

    Sim b;
    ASSERT_EQ(axisw_sim_load_checkpoint(path.c_str(), 1.0, 1.0, &b.sim), AXISW_OK) << axisw_last_error();
    EXPECT_EQ(axisw_sim_time(b.sim), axisw_sim_time(a.sim));
    std::vector<double> wa(16 * 8), wb(16 * 8);
    ASSERT_EQ(axisw_sim_copy_field(a.sim, AXISW_FIELD_W1, wa.data(), wa.size()), AXISW_OK);
    ASSERT_EQ(axisw_sim_copy_field(b.sim, AXISW_FIELD_W1, wb.data(), wb.size()), AXISW_OK);
    EXPECT_EQ(wa, wb);

    axisw::testing::write_file(dir / "bad.bin", "NOTACHECKPOINT-------------------------------------------------------");
    axisw_sim* c = nullptr;
    EXPECT_EQ(axisw_sim_load_checkpoint((dir / "bad.bin").string().c_str(), 1.0, 1.0, &c), AXISW_ERR_INCOMPATIBLE);
    EXPECT_EQ(c, nullptr);
    EXPECT_EQ(axisw_sim_load_checkpoint((dir / "none.bin").string().c_str(), 1.0, 1.0, &c), AXISW_ERR_IO);
}

TEST(CApi, ErrorsAndNullArguments) {
    axisw_grid* g = nullptr;
    EXPECT_EQ(axisw_grid_create(1.0, 8, 7, &g), AXISW_ERR_CONFIG);
    EXPECT_EQ(g, nullptr);
    EXPECT_NE(std::string(axisw_last_error()), "");
    EXPECT_EQ(axisw_grid_create(1.0, 8, 8, nullptr), AXISW_ERR_INVALID_ARGUMENT);

    ASSERT_EQ(axisw_grid_create(4.0, 16, 8, &g), AXISW_OK);
    axisw_init_params params;
    axisw_init_params_default(&params);
    params.q = 1.5;
    params.p = 3.0;
    axisw_sim* sim = nullptr;
    EXPECT_EQ(axisw_sim_create(g, &params, 1.0, 1.0, &sim), AXISW_ERR_CONFIG);
    axisw_init_params_default(&params);
    EXPECT_EQ(axisw_sim_create(g, &params, -1.0, 1.0, &sim), AXISW_ERR_CONFIG);
    EXPECT_EQ(axisw_sim_create(g, nullptr, 1.0, 1.0, &sim), AXISW_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(sim, nullptr);

    ASSERT_EQ(axisw_sim_create(g, &params, 1.0, 1.0, &sim), AXISW_OK);
    EXPECT_EQ(axisw_sim_step(sim, 10.0, 0.5), AXISW_ERR_CFL);
    EXPECT_EQ(axisw_sim_time(sim), 0.0);  // failed step leaves the state alone
    EXPECT_EQ(axisw_sim_step(sim, 1e-4, 2.0), AXISW_ERR_CONFIG);
    EXPECT_EQ(axisw_sim_step(nullptr, 1e-4, 0.5), AXISW_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(axisw_sim_report(sim, nullptr), AXISW_ERR_INVALID_ARGUMENT);
    EXPECT_TRUE(std::isnan(axisw_sim_time(nullptr)));
    axisw_sim_destroy(sim);
    axisw_grid_destroy(g);
    axisw_sim_destroy(nullptr);
    axisw_grid_destroy(nullptr);

    EXPECT_STREQ(axisw_status_string(AXISW_OK), "ok");
    EXPECT_STRNE(axisw_status_string(AXISW_ERR_BLOWUP), axisw_status_string(AXISW_ERR_CFL));
}

TEST(CApi, BlowUpKeepsPreviousState) {
    axisw_grid* g = nullptr;
    ASSERT_EQ(axisw_grid_create(4.0, 16, 8, &g), AXISW_OK);
    axisw_init_params params;
    axisw_init_params_default(&params);
    params.U1.amplitude = 1e150;  // u1^2 is finite, the nonlinear terms overflow
    params.W1.amplitude = 0.0;
    axisw_sim* sim = nullptr;
    ASSERT_EQ(axisw_sim_create(g, &params, 1.0, 1.0, &sim), AXISW_OK) << axisw_last_error();
    EXPECT_EQ(axisw_sim_step(sim, 1e-3, 0.5), AXISW_ERR_BLOWUP);
    EXPECT_EQ(axisw_sim_time(sim), 0.0);
    axisw_sim_destroy(sim);
    axisw_grid_destroy(g);
}

TEST(CApi, AnalysisFunctions) {
    double eps = -1.0;
    ASSERT_EQ(axisw_epsilon_threshold(AXISW_DATA1, 0.5, 8.0, 4.0, 0.0, 0.0, 1.0, 1.0, &eps), AXISW_OK);
    EXPECT_EQ(eps, 1.0);
    EXPECT_EQ(axisw_epsilon_threshold(AXISW_DATA3, 0.5, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, &eps), AXISW_ERR_CONFIG);
    double ap = 0.0;
    ASSERT_EQ(axisw_ap_constant(2.0, 2.0, 0.0, 1.0, &ap), AXISW_OK);
    EXPECT_NEAR(ap, 10.0 / 7.0, 1e-9);
    EXPECT_EQ(axisw_ap_constant(4.5, 2.0, 0.0, 1.0, &ap), AXISW_ERR_CONFIG);
    EXPECT_EQ(axisw_ap_constant(1.0, 2.0, 0.0, 1.0, nullptr), AXISW_ERR_INVALID_ARGUMENT);
}

TEST(CApi, RunExperiment) {
    const auto dir = axisw::testing::scratch_dir();
    axisw_run_options opts;
    axisw_run_options_default(&opts);
    EXPECT_EQ(axisw_run_experiment((dir / "missing.yaml").string().c_str(), &opts), AXISW_ERR_IO);
    EXPECT_EQ(axisw_run_experiment(nullptr, &opts), AXISW_ERR_INVALID_ARGUMENT);

    axisw::testing::write_file(dir / "bad.yaml", "mode: simulate\ngrid: {R: 4, Nr: 16, Nz: 8, extra: 1}\n");
    EXPECT_EQ(axisw_run_experiment((dir / "bad.yaml").string().c_str(), &opts), AXISW_ERR_CONFIG);
    EXPECT_NE(std::string(axisw_last_error()).find("grid.extra"), std::string::npos);

    axisw::testing::write_file(dir / "run.yaml",
                               "mode: threshold\n"
                               "grid: {R: 4, Nr: 16, Nz: 8}\n"
                               "init: {family: data1, epsilon: 0.5}\n"
                               "stepping: {t_end: 0.002, sample_interval: 0.001}\n");
    EXPECT_EQ(axisw_run_experiment((dir / "run.yaml").string().c_str(), &opts), AXISW_OK);

    const std::string out = (dir / "sim").string();
    opts.mode = AXISW_MODE_SIMULATE;
    opts.out_dir = out.c_str();
    opts.deterministic = 1;
    EXPECT_EQ(axisw_run_experiment((dir / "run.yaml").string().c_str(), &opts), AXISW_OK);
    EXPECT_TRUE(std::filesystem::exists(dir / "sim" / "timeseries.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "sim" / "checkpoint.bin"));
}
