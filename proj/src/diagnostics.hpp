#pragma once

// Quantities from the Lyapunov-functional argument evaluated on simulation
// states: f = |u1|^p, g = |w1|^q, their weighted L2 norms, the functional
// E = (C_q / 2p) int f^2 r dr dz + (1 / 2q) int g^2 r dr dz, the smallness
// margin, epsilon thresholds and the rescaled growth bounds.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "evolution.hpp"
#include "init_data.hpp"

namespace axisw {

/// The two inequality constants of the energy argument. Their values are
/// not known, so they are configured or scanned.
struct AnalysisConstants {
    double Cp = 1.0;
    double Cq = 1.0;
};

void validate(const AnalysisConstants& c);

struct NormReport {
    double t = 0.0;
    double norm_u1_2p = 0.0;
    double norm_w1_2q = 0.0;
    double f_L2 = 0.0;
    double g_L2 = 0.0;
    double lyapunov = 0.0;
    double cond1_margin = 0.0;
    double grad_f_L2 = 0.0;
    double grad_g_L2 = 0.0;
    double div_residual_max = 0.0;
    double parity_error = 0.0;
    double kinetic_energy = 0.0;
    double dt_used = 0.0;
};

/// Pointwise |u1|^p and |w1|^q.
std::pair<ScalarField, ScalarField> compute_fg(const State& s, double p, double q);

/// (int |grad h|^2 r dr dz)^(1/2) with grid derivatives.
double gradient_l2(const ScalarField& h);

double lyapunov(const State& s, const AnalysisConstants& c, double p, double q);
double lyapunov_from_norms(double f_L2, double g_L2, const AnalysisConstants& c, double p, double q);

/// (2p - 1) / (2 p^2)
double cond1_bound(double p);

/// (2p - 1)/(2p^2) - C_p ||g||^(1/q); positive when the smallness condition holds.
double cond1_margin(const State& s, const AnalysisConstants& c, double p, double q);
double cond1_margin_from_norm(double g_L2, const AnalysisConstants& c, double p, double q);

/// max over u1, w1, psi1 of |v(r, z) + v(r, 1 - z)|.
double parity_error(const State& s);

/// int (v_r^2 + v_z^2 + (r u1)^2) r dr dz
double kinetic_energy(const State& s);

NormReport compute_report(const State& s, const AnalysisConstants& c, double p, double q, double dt_used = 0.0);

/// Left side of the smallness condition on the initial data as a function of
/// epsilon, for the given family's exponents.
double threshold_lhs(double epsilon, Family family, double delta, double p, double q, double norm_W1_2q,
                     double norm_U1_2p, const AnalysisConstants& c);

/// Largest epsilon in (0, 1] for which the smallness condition on the initial
/// data holds. Returns 1 if it holds at epsilon = 1 and 0 if it fails on the
/// whole interval. Throws ConfigError when the q-constraint of the family is
/// violated (the exponents are then not positive).
double epsilon_threshold(Family family, double delta, double p, double q, double norm_W1_2q, double norm_U1_2p,
                         const AnalysisConstants& c);

/// Profile norms are computed by sampling U1, W1 on `rho_grid`.
double epsilon_threshold(const InitConfig& cfg, const AnalysisConstants& c, const Grid& rho_grid);

struct RescaledBounds {
    double bound_u1 = 0.0;
    double bound_w1 = 0.0;
    // individual terms, first = initial-data term
    double u1_first = 0.0;
    double u1_second = 0.0;
    double w1_first = 0.0;
    double w1_second = 0.0;
};

/// Global bounds on ||u1^eps||_{2p} and ||w1^eps||_{2q} for the thin-domain
/// (Data-2) rescaling.
RescaledBounds rescaled_bounds(double norm_U1_2p, double norm_W1_2q, double epsilon, double delta, double p,
                               double q, const AnalysisConstants& c);

/// Norm caps implied by E(t) <= E(0): ||u1||_{2p} <= (2p E0 / C_q)^(1/2p),
/// ||w1||_{2q} <= (2q E0)^(1/2q).
std::pair<double, double> global_bound_norms(double E0, const AnalysisConstants& c, double p, double q);

/// ||g0||^(1/q) + (C_q/2)^(1/2q) ||f0||^(2/p)
double bound_g(double f0_L2, double g0_L2, const AnalysisConstants& c, double p, double q);

/// {2^k : k = -10..10}
std::vector<double> default_cq_scan();

/// True if every step of the sequence satisfies E[i] <= E[i-1] (1 + slack).
bool non_increasing(std::span<const double> series, double relative_slack);

/// First C_q in `scan` whose Lyapunov sequence (rebuilt from the sampled f/g
/// norms) is non-increasing within `relative_slack`.
std::optional<double> find_monotone_cq(std::span<const NormReport> samples, double p, double q, double Cp,
                                       std::span<const double> scan, double relative_slack);

}  // namespace axisw
