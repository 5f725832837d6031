#ifndef AXISW_AXISW_H
#define AXISW_AXISW_H

/* C interface to the axisymmetric swirl solver. All functions report failure
 * through axisw_status; the message of the most recent failure on the calling
 * thread is available from axisw_last_error(). Handles are opaque and must be
 * released with the matching destroy function. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AXISW_API __declspec(dllexport)
#else
#define AXISW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum axisw_status {
    AXISW_OK = 0,
    AXISW_ERR_CONFIG = 1,
    AXISW_ERR_DATA = 2,
    AXISW_ERR_BLOWUP = 3,
    AXISW_ERR_CFL = 4,
    AXISW_ERR_INCOMPATIBLE = 5,
    AXISW_ERR_IO = 6,
    AXISW_ERR_INTERNAL = 7,
    AXISW_ERR_UNDEFINED = 8,
    AXISW_ERR_INVALID_ARGUMENT = 9
} axisw_status;

AXISW_API const char* axisw_last_error(void);
AXISW_API const char* axisw_status_string(axisw_status status);

/* ---- grid ---------------------------------------------------------------- */

typedef struct axisw_grid axisw_grid;

/* Radial domain [0, R] with Nr cell-centred nodes, periodic z in [0, 1) with Nz
 * nodes (Nr >= 4, Nz >= 4 and even). */
AXISW_API axisw_status axisw_grid_create(double R, int Nr, int Nz, axisw_grid** out);
AXISW_API void axisw_grid_destroy(axisw_grid* grid);

/* ---- initial data -------------------------------------------------------- */

typedef enum axisw_family { AXISW_DATA1 = 0, AXISW_DATA2 = 1, AXISW_DATA3 = 2 } axisw_family;

/* amplitude * exp(-(rho/width)^2) * sin(2 pi mode z); amplitude 0 gives the zero profile. */
typedef struct axisw_gaussian_profile {
    double amplitude;
    double width;
    int mode;
} axisw_gaussian_profile;

typedef struct axisw_init_params {
    axisw_family family;
    double epsilon;
    double delta;
    double p;
    double q;
    axisw_gaussian_profile U1;
    axisw_gaussian_profile W1;
} axisw_init_params;

/* Data-1, epsilon 1, delta 0.5, p 8, q 4, unit Gaussian-sine profiles. */
AXISW_API void axisw_init_params_default(axisw_init_params* params);

/* ---- simulation ---------------------------------------------------------- */

typedef struct axisw_sim axisw_sim;

typedef struct axisw_norm_report {
    double t;
    double norm_u1_2p;
    double norm_w1_2q;
    double f_L2;
    double g_L2;
    double lyapunov;
    double cond1_margin;
    double grad_f_L2;
    double grad_g_L2;
    double div_residual_max;
    double parity_error;
    double kinetic_energy;
    double dt_used;
} axisw_norm_report;

typedef enum axisw_field { AXISW_FIELD_U1 = 0, AXISW_FIELD_W1 = 1, AXISW_FIELD_PSI1 = 2 } axisw_field;

/* Builds the initial state on `grid`. C_p, C_q enter the diagnostics only. */
AXISW_API axisw_status axisw_sim_create(const axisw_grid* grid, const axisw_init_params* params, double Cp,
                                        double Cq, axisw_sim** out);

/* Restores a simulation from a checkpoint file. */
AXISW_API axisw_status axisw_sim_load_checkpoint(const char* path, double Cp, double Cq, axisw_sim** out);

AXISW_API void axisw_sim_destroy(axisw_sim* sim);

/* One time step. dt <= 0 selects min(1e-3, cfl_safety * cfl_dt). A blow-up
 * leaves the simulation at its previous state. */
AXISW_API axisw_status axisw_sim_step(axisw_sim* sim, double dt, double cfl_safety);

AXISW_API double axisw_sim_time(const axisw_sim* sim);
AXISW_API axisw_status axisw_sim_cfl_dt(const axisw_sim* sim, double* out);
AXISW_API axisw_status axisw_sim_report(const axisw_sim* sim, axisw_norm_report* out);

/* Copies Nr * Nz values (row-major, r outer) into buffer; len is the buffer length. */
AXISW_API axisw_status axisw_sim_copy_field(const axisw_sim* sim, axisw_field which, double* buffer, size_t len);

AXISW_API axisw_status axisw_sim_write_checkpoint(const axisw_sim* sim, const char* path);

/* ---- analysis ------------------------------------------------------------ */

/* Largest epsilon in (0, 1] satisfying the smallness condition for the given
 * profile norms ||W1||_{2q}, ||U1||_{2p}. */
AXISW_API axisw_status axisw_epsilon_threshold(axisw_family family, double delta, double p, double q,
                                               double norm_W1_2q, double norm_U1_2p, double Cp, double Cq,
                                               double* out);

/* A_p quantity of the weight r^(-alpha) over one 5D ball. */
AXISW_API axisw_status axisw_ap_constant(double alpha, double p, double ball_center_r, double ball_radius,
                                         double* out);

/* ---- experiments --------------------------------------------------------- */

typedef enum axisw_mode {
    AXISW_MODE_FROM_CONFIG = 0,
    AXISW_MODE_SIMULATE = 1,
    AXISW_MODE_SWEEP = 2,
    AXISW_MODE_THRESHOLD = 3,
    AXISW_MODE_RIESZ_SURVEY = 4
} axisw_mode;

typedef struct axisw_run_options {
    axisw_mode mode;          /* overrides the config's mode unless FROM_CONFIG */
    const char* out_dir;      /* NULL: output.directory from the config */
    const char* resume_path;  /* NULL: fresh run */
    int deterministic;
    int has_seed;
    uint64_t seed;
} axisw_run_options;

AXISW_API void axisw_run_options_default(axisw_run_options* options);

/* Runs the experiment described by a YAML config file. Results go to stdout,
 * diagnostics and errors to stderr. */
AXISW_API axisw_status axisw_run_experiment(const char* config_path, const axisw_run_options* options);

#ifdef __cplusplus
}
#endif

#endif
