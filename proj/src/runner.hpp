#pragma once

// Experiment configuration, checkpoint files, time-series CSV and the
// simulate / sweep / threshold / riesz-survey drivers.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "evolution.hpp"
#include "init_data.hpp"

namespace axisw {

enum class Mode { Simulate, Sweep, Threshold, RieszSurvey };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& name);

struct GridSpec {
    double R = 4.0;
    int Nr = 64;
    int Nz = 32;
};

struct SteppingSpec {
    bool auto_dt = true;      // dt = min(dt_max, cfl_safety * cfl_dt)
    double dt = 1e-3;         // fixed step when auto_dt is false
    double dt_max = 1e-3;
    double cfl_safety = 0.5;
    double t_end = 0.0;
    double sample_interval = 0.0;
    int checkpoint_every = 1;  // in samples
};

struct DiagnosticsSpec {
    AnalysisConstants constants;
    std::vector<double> cq_scan = default_cq_scan();
    double monotone_slack = 1e-3;
};

struct SweepSpec {
    std::vector<double> epsilons;
    std::optional<double> radius_over_epsilon;  // R = value / epsilon per run
    unsigned workers = 0;                       // 0 = hardware concurrency
};

struct SurveySpec {
    std::size_t samples = 20;
    std::uint64_t seed = 1;
    double R = 6.0;
    int coarse_Nr = 128;
    int coarse_Nz = 32;
    int fine_Nr = 256;
    int fine_Nz = 64;
    double p = 8.0;
};

struct ExperimentConfig {
    Mode mode = Mode::Simulate;
    GridSpec grid;
    InitConfig init;
    SteppingSpec stepping;
    DiagnosticsSpec diagnostics;
    SweepSpec sweep;
    SurveySpec survey;
    std::string output_dir = "out";
    bool deterministic = false;

    // which top-level blocks were present in the file
    bool has_grid = false;
    bool has_init = false;
    bool has_stepping = false;
    bool has_sweep = false;
    bool has_survey = false;
};

/// Parses a YAML experiment description. Errors carry "<source>:<line>:" and the
/// dotted field name. Relative table paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config",
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks that every block needed by cfg.mode is present and consistent.
void validate_config(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Checkpoints
//
// Layout, all little-endian:
//   char[5]  magic "AXSW1"
//   uint32   version (1)
//   float64  R;  uint32 Nr;  uint32 Nz
//   float64  t, epsilon, delta, p, q
//   float64  u1[Nr*Nz], then w1[Nr*Nz]   (row-major, r outer)
// psi1 and the velocity are re-derived on load.

inline constexpr char kCheckpointMagic[5] = {'A', 'X', 'S', 'W', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    double R = 0.0;
    int Nr = 0;
    int Nz = 0;
    double t = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    double p = 0.0;
    double q = 0.0;
    std::vector<double> u1;
    std::vector<double> w1;
};

Checkpoint make_checkpoint(const State& s, const InitConfig& init);

/// Writes to a temporary file and renames it over `path`.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

/// Throws IncompatibleError on bad magic, version or truncated data.
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Rebuilds the state (solving psi1 and velocity) on ws's grid.
State restore_state(const Checkpoint& ckpt, const PoissonWorkspace& ws);

/// Throws IncompatibleError if grid or (epsilon, delta, p, q) differ.
void check_compatible(const Checkpoint& ckpt, const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Time series

inline constexpr const char* kTimeseriesHeader =
    "t,norm_u1_2p,norm_w1_2q,f_L2,g_L2,lyapunov,cond1_margin,grad_f_L2,grad_g_L2,div_residual_max,"
    "parity_error,kinetic_energy,dt_used";

void write_csv_row(std::ostream& out, const NormReport& r);
std::vector<NormReport> read_timeseries(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Drivers

enum class ExitStatus : int {
    Ok = 0,
    ConfigError = 1,
    DataError = 2,
    BlowUp = 3,
    CflViolation = 4,
    Incompatible = 5,
    IoError = 6,
    Internal = 7,
};

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;      // overrides output.directory
    std::optional<std::filesystem::path> resume_from;  // checkpoint to continue
    std::optional<std::uint64_t> seed;                 // overrides survey.seed
    bool deterministic = false;
};

struct SimulationResult {
    ExitStatus status = ExitStatus::Ok;
    std::string message;
    std::vector<NormReport> samples;  // rows written by this run
};

/// Steps the configured (or resumed) state to t_end, writing
/// <out>/timeseries.csv and <out>/checkpoint.bin. A resumed run appends to an
/// existing timeseries.csv and omits the row at the resume time.
SimulationResult run_simulation(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                const std::optional<Checkpoint>& resume, std::ostream& log);

/// Dispatches on cfg.mode. Never throws; failures map to an exit status and a
/// message on `log`.
ExitStatus run_experiment(ExperimentConfig cfg, const RunOptions& options, std::ostream& out, std::ostream& log);

/// Loads the checkpoint, verifies it against cfg and continues the run.
ExitStatus resume(const std::filesystem::path& checkpoint, ExperimentConfig cfg, const RunOptions& options,
                  std::ostream& out, std::ostream& log);

/// Formats a double for console output, keeping a trailing ".0" on integers.
std::string format_number(double v);

}  // namespace axisw
