#include "axisw/axisw.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "evolution.hpp"
#include "init_data.hpp"
#include "riesz.hpp"
#include "runner.hpp"

struct axisw_grid {
    axisw::Grid grid;
};

struct axisw_sim {
    axisw::InitConfig init;
    axisw::AnalysisConstants constants;
    std::unique_ptr<axisw::PoissonWorkspace> ws;
    std::optional<axisw::State> state;
    double last_dt = 0.0;
};

namespace {

thread_local std::string g_last_error;

axisw_status fail(axisw_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class Fn>
axisw_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return AXISW_OK;
    } catch (const axisw::ConfigError& e) {
        return fail(AXISW_ERR_CONFIG, e.what());
    } catch (const axisw::DataError& e) {
        return fail(AXISW_ERR_DATA, e.what());
    } catch (const axisw::BlowUp& e) {
        return fail(AXISW_ERR_BLOWUP, e.what());
    } catch (const axisw::CflViolation& e) {
        return fail(AXISW_ERR_CFL, e.what());
    } catch (const axisw::IncompatibleError& e) {
        return fail(AXISW_ERR_INCOMPATIBLE, e.what());
    } catch (const axisw::IoError& e) {
        return fail(AXISW_ERR_IO, e.what());
    } catch (const axisw::UndefinedError& e) {
        return fail(AXISW_ERR_UNDEFINED, e.what());
    } catch (const std::exception& e) {
        return fail(AXISW_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(AXISW_ERR_INTERNAL, "unknown exception");
    }
}

axisw::Family to_family(axisw_family f) {
    switch (f) {
        case AXISW_DATA1: return axisw::Family::Data1;
        case AXISW_DATA2: return axisw::Family::Data2;
        case AXISW_DATA3: return axisw::Family::Data3;
    }
    throw axisw::ConfigError("unknown data family");
}

axisw::Profile to_profile(const axisw_gaussian_profile& p) {
    if (p.amplitude == 0.0) return axisw::Profile::zero();
    if (!(p.width > 0.0) || p.mode < 1) throw axisw::ConfigError("profile needs width > 0 and mode >= 1");
    return axisw::Profile::gaussian_sine(p.amplitude, p.width, p.mode);
}

void copy_report(const axisw::NormReport& r, axisw_norm_report* out) {
    *out = {r.t,         r.norm_u1_2p,   r.norm_w1_2q, r.f_L2,      r.g_L2,
            r.lyapunov,  r.cond1_margin, r.grad_f_L2,  r.grad_g_L2, r.div_residual_max,
            r.parity_error, r.kinetic_energy, r.dt_used};
}

}  // namespace

extern "C" {

const char* axisw_last_error(void) { return g_last_error.c_str(); }

const char* axisw_status_string(axisw_status status) {
    switch (status) {
        case AXISW_OK: return "ok";
        case AXISW_ERR_CONFIG: return "configuration error";
        case AXISW_ERR_DATA: return "data error";
        case AXISW_ERR_BLOWUP: return "blow-up";
        case AXISW_ERR_CFL: return "CFL violation";
        case AXISW_ERR_INCOMPATIBLE: return "incompatible checkpoint";
        case AXISW_ERR_IO: return "i/o error";
        case AXISW_ERR_INTERNAL: return "internal error";
        case AXISW_ERR_UNDEFINED: return "undefined quantity";
        case AXISW_ERR_INVALID_ARGUMENT: return "invalid argument";
    }
    return "unknown status";
}

axisw_status axisw_grid_create(double R, int Nr, int Nz, axisw_grid** out) {
    if (!out) return fail(AXISW_ERR_INVALID_ARGUMENT, "null output pointer");
    *out = nullptr;
    return guarded([&] { *out = new axisw_grid{axisw::make_grid(R, Nr, Nz)}; });
}

void axisw_grid_destroy(axisw_grid* grid) { delete grid; }

void axisw_init_params_default(axisw_init_params* params) {
    if (!params) return;
    *params = {AXISW_DATA1, 1.0, 0.5, 8.0, 4.0, {1.0, 1.0, 1}, {1.0, 1.0, 1}};
}

axisw_status axisw_sim_create(const axisw_grid* grid, const axisw_init_params* params, double Cp, double Cq,
                              axisw_sim** out) {
    if (!grid || !params || !out) return fail(AXISW_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto sim = std::make_unique<axisw_sim>();
        sim->constants = {Cp, Cq};
        axisw::validate(sim->constants);
        sim->init.family = to_family(params->family);
        sim->init.epsilon = params->epsilon;
        sim->init.delta = params->delta;
        sim->init.p = params->p;
        sim->init.q = params->q;
        sim->init.U1 = to_profile(params->U1);
        sim->init.W1 = to_profile(params->W1);
        sim->ws = std::make_unique<axisw::PoissonWorkspace>(grid->grid);
        sim->state.emplace(axisw::build_initial(sim->init, grid->grid, *sim->ws));
        *out = sim.release();
    });
}

axisw_status axisw_sim_load_checkpoint(const char* path, double Cp, double Cq, axisw_sim** out) {
    if (!path || !out) return fail(AXISW_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        const axisw::Checkpoint ckpt = axisw::read_checkpoint(path);
        auto sim = std::make_unique<axisw_sim>();
        sim->constants = {Cp, Cq};
        axisw::validate(sim->constants);
        sim->init.epsilon = ckpt.epsilon;
        sim->init.delta = ckpt.delta;
        sim->init.p = ckpt.p;
        sim->init.q = ckpt.q;
        sim->ws = std::make_unique<axisw::PoissonWorkspace>(axisw::make_grid(ckpt.R, ckpt.Nr, ckpt.Nz));
        sim->state.emplace(axisw::restore_state(ckpt, *sim->ws));
        *out = sim.release();
    });
}

void axisw_sim_destroy(axisw_sim* sim) { delete sim; }

axisw_status axisw_sim_step(axisw_sim* sim, double dt, double cfl_safety) {
    if (!sim) return fail(AXISW_ERR_INVALID_ARGUMENT, "null simulation");
    return guarded([&] {
        axisw::StepConfig cfg;
        cfg.cfl_safety = cfl_safety;
        cfg.dt = dt > 0.0 ? dt : std::min(1e-3, cfl_safety * axisw::cfl_dt(*sim->state));
        sim->state.emplace(axisw::step(*sim->state, cfg, *sim->ws));
        sim->last_dt = cfg.dt;
    });
}

double axisw_sim_time(const axisw_sim* sim) { return sim ? sim->state->t : std::nan(""); }

axisw_status axisw_sim_cfl_dt(const axisw_sim* sim, double* out) {
    if (!sim || !out) return fail(AXISW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = axisw::cfl_dt(*sim->state); });
}

axisw_status axisw_sim_report(const axisw_sim* sim, axisw_norm_report* out) {
    if (!sim || !out) return fail(AXISW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        copy_report(axisw::compute_report(*sim->state, sim->constants, sim->init.p, sim->init.q, sim->last_dt), out);
    });
}

axisw_status axisw_sim_copy_field(const axisw_sim* sim, axisw_field which, double* buffer, size_t len) {
    if (!sim || !buffer) return fail(AXISW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const axisw::ScalarField* field = nullptr;
        switch (which) {
            case AXISW_FIELD_U1: field = &sim->state->u1; break;
            case AXISW_FIELD_W1: field = &sim->state->w1; break;
            case AXISW_FIELD_PSI1: field = &sim->state->psi1; break;
        }
        if (!field) throw axisw::ConfigError("unknown field selector");
        const auto values = field->values();
        if (len < values.size())
            throw axisw::ConfigError("buffer holds " + std::to_string(len) + " values, need " +
                                     std::to_string(values.size()));
        std::copy(values.begin(), values.end(), buffer);
    });
}

axisw_status axisw_sim_write_checkpoint(const axisw_sim* sim, const char* path) {
    if (!sim || !path) return fail(AXISW_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { axisw::write_checkpoint(path, axisw::make_checkpoint(*sim->state, sim->init)); });
}

axisw_status axisw_epsilon_threshold(axisw_family family, double delta, double p, double q, double norm_W1_2q,
                                     double norm_U1_2p, double Cp, double Cq, double* out) {
    if (!out) return fail(AXISW_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = axisw::epsilon_threshold(to_family(family), delta, p, q, norm_W1_2q, norm_U1_2p, {Cp, Cq});
    });
}

axisw_status axisw_ap_constant(double alpha, double p, double ball_center_r, double ball_radius, double* out) {
    if (!out) return fail(AXISW_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] { *out = axisw::ap_constant(alpha, p, ball_center_r, ball_radius).value; });
}

void axisw_run_options_default(axisw_run_options* options) {
    if (!options) return;
    *options = {AXISW_MODE_FROM_CONFIG, nullptr, nullptr, 0, 0, 0};
}

axisw_status axisw_run_experiment(const char* config_path, const axisw_run_options* options) {
    if (!config_path) return fail(AXISW_ERR_INVALID_ARGUMENT, "null config path");
    axisw_run_options opts;
    axisw_run_options_default(&opts);
    if (options) opts = *options;

    std::optional<axisw::ExperimentConfig> cfg;
    const axisw_status loaded = guarded([&] { cfg = axisw::load_config(config_path); });
    if (loaded != AXISW_OK) {
        std::cerr << "error: " << g_last_error << '\n';
        return loaded;
    }

    switch (opts.mode) {
        case AXISW_MODE_FROM_CONFIG: break;
        case AXISW_MODE_SIMULATE: cfg->mode = axisw::Mode::Simulate; break;
        case AXISW_MODE_SWEEP: cfg->mode = axisw::Mode::Sweep; break;
        case AXISW_MODE_THRESHOLD: cfg->mode = axisw::Mode::Threshold; break;
        case AXISW_MODE_RIESZ_SURVEY: cfg->mode = axisw::Mode::RieszSurvey; break;
        default: return fail(AXISW_ERR_INVALID_ARGUMENT, "unknown mode");
    }

    axisw::RunOptions run;
    if (opts.out_dir) run.out_dir = opts.out_dir;
    if (opts.resume_path) run.resume_from = opts.resume_path;
    if (opts.has_seed) run.seed = opts.seed;
    run.deterministic = opts.deterministic != 0;

    std::ostringstream log;
    const axisw::ExitStatus status = axisw::run_experiment(std::move(*cfg), run, std::cout, log);
    std::cout.flush();
    std::cerr << log.str();
    g_last_error = log.str();
    while (!g_last_error.empty() && g_last_error.back() == '\n') g_last_error.pop_back();
    return static_cast<axisw_status>(static_cast<int>(status));
}

}  // extern "C"
