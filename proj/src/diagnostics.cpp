#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace axisw {

void validate(const AnalysisConstants& c) {
    if (!(c.Cp > 0.0) || !(c.Cq > 0.0)) throw ConfigError("analysis constants C_p, C_q must be positive");
}

std::pair<ScalarField, ScalarField> compute_fg(const State& s, double p, double q) {
    ScalarField f(s.grid());
    ScalarField g(s.grid());
    auto u = s.u1.values();
    auto w = s.w1.values();
    auto fv = f.values();
    auto gv = g.values();
    for (std::size_t i = 0; i < fv.size(); ++i) {
        fv[i] = std::pow(std::abs(u[i]), p);
        gv[i] = std::pow(std::abs(w[i]), q);
    }
    return {std::move(f), std::move(g)};
}

double gradient_l2(const ScalarField& h) {
    const ScalarField hr = ddr(h);
    const ScalarField hz = ddz(h);
    ScalarField sq = multiply(hr, hr);
    sq += multiply(hz, hz);
    return std::sqrt(weighted_integral(sq));
}

double lyapunov_from_norms(double f_L2, double g_L2, const AnalysisConstants& c, double p, double q) {
    return c.Cq / (2.0 * p) * f_L2 * f_L2 + 1.0 / (2.0 * q) * g_L2 * g_L2;
}

double lyapunov(const State& s, const AnalysisConstants& c, double p, double q) {
    const auto [f, g] = compute_fg(s, p, q);
    return c.Cq / (2.0 * p) * weighted_integral(multiply(f, f)) + 1.0 / (2.0 * q) * weighted_integral(multiply(g, g));
}

double cond1_bound(double p) { return (2.0 * p - 1.0) / (2.0 * p * p); }

double cond1_margin_from_norm(double g_L2, const AnalysisConstants& c, double p, double q) {
    return cond1_bound(p) - c.Cp * std::pow(g_L2, 1.0 / q);
}

double cond1_margin(const State& s, const AnalysisConstants& c, double p, double q) {
    const auto [f, g] = compute_fg(s, p, q);
    return cond1_margin_from_norm(std::sqrt(weighted_integral(multiply(g, g))), c, p, q);
}

double parity_error(const State& s) {
    return std::max({z_parity_error(s.u1), z_parity_error(s.w1), z_parity_error(s.psi1)});
}

double kinetic_energy(const State& s) {
    ScalarField e = multiply(s.vel.vr, s.vel.vr);
    e += multiply(s.vel.vz, s.vel.vz);
    const ScalarField swirl = s.u_theta();
    e += multiply(swirl, swirl);
    return weighted_integral(e);
}

NormReport compute_report(const State& s, const AnalysisConstants& c, double p, double q, double dt_used) {
    const auto [f, g] = compute_fg(s, p, q);
    NormReport r;
    r.t = s.t;
    r.f_L2 = std::sqrt(weighted_integral(multiply(f, f)));
    r.g_L2 = std::sqrt(weighted_integral(multiply(g, g)));
    r.norm_u1_2p = weighted_lp_norm(s.u1, 2.0 * p);
    r.norm_w1_2q = weighted_lp_norm(s.w1, 2.0 * q);
    r.lyapunov = lyapunov_from_norms(r.f_L2, r.g_L2, c, p, q);
    r.cond1_margin = cond1_margin_from_norm(r.g_L2, c, p, q);
    r.grad_f_L2 = gradient_l2(f);
    r.grad_g_L2 = gradient_l2(g);
    r.div_residual_max = divergence_residual(s.vel).max_abs();
    r.parity_error = parity_error(s);
    r.kinetic_energy = kinetic_energy(s);
    r.dt_used = dt_used;
    return r;
}

namespace {

struct ThresholdExponents {
    double first;   // on ||W1||
    double second;  // on ||U1||^2
    double coeff;   // (C_q/2)^(1/2q)
};

ThresholdExponents threshold_exponents(Family family, double delta, double p, double q, const AnalysisConstants& c) {
    if (family == Family::Data3) {
        return {delta * (1.0 - 1.0 / q), delta * (2.0 - 1.0 / q), std::pow(c.Cq / 2.0, 1.0 / p)};
    }
    return {delta - 1.0 / q, 2.0 * delta - 1.0 / q, std::pow(c.Cq / 2.0, 1.0 / (2.0 * q))};
}

}  // namespace

double threshold_lhs(double epsilon, Family family, double delta, double p, double q, double norm_W1_2q,
                     double norm_U1_2p, const AnalysisConstants& c) {
    const ThresholdExponents e = threshold_exponents(family, delta, p, q, c);
    return c.Cp * (std::pow(epsilon, e.first) * norm_W1_2q + e.coeff * std::pow(epsilon, e.second) * norm_U1_2p * norm_U1_2p);
}

double epsilon_threshold(Family family, double delta, double p, double q, double norm_W1_2q, double norm_U1_2p,
                         const AnalysisConstants& c) {
    validate(c);
    const ThresholdExponents e = threshold_exponents(family, delta, p, q, c);
    if (!(e.first > 0.0) || !(e.second > 0.0)) {
        throw ConfigError(family == Family::Data3 ? "epsilon_threshold: data3 requires q > 1"
                                                  : "epsilon_threshold: requires q > 1/delta");
    }
    const double rhs = cond1_bound(p);
    auto lhs = [&](double eps) { return threshold_lhs(eps, family, delta, p, q, norm_W1_2q, norm_U1_2p, c); };

    if (lhs(1.0) <= rhs) return 1.0;
    if (!(lhs(1e-300) <= rhs)) return 0.0;

    // lhs is increasing in epsilon: satisfied on (0, eps*], violated above.
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (lhs(mid) <= rhs)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double epsilon_threshold(const InitConfig& cfg, const AnalysisConstants& c, const Grid& rho_grid) {
    const double nW = weighted_lp_norm(sample_profile(cfg.W1, rho_grid), 2.0 * cfg.q);
    const double nU = weighted_lp_norm(sample_profile(cfg.U1, rho_grid), 2.0 * cfg.p);
    return epsilon_threshold(cfg.family, cfg.delta, cfg.p, cfg.q, nW, nU, c);
}

RescaledBounds rescaled_bounds(double norm_U1_2p, double norm_W1_2q, double epsilon, double delta, double p,
                               double q, const AnalysisConstants& c) {
    validate(c);
    RescaledBounds b;
    b.u1_first = std::pow(epsilon, -2.0 + delta + 1.0 / (2.0 * p)) * norm_U1_2p;
    b.u1_second = std::pow(2.0 / c.Cq, 1.0 / (2.0 * p)) * std::pow(epsilon, -2.0 + delta / 2.0 + 1.0 / (2.0 * p)) *
                  std::sqrt(norm_W1_2q);
    b.w1_first = std::pow(epsilon, -3.0 + delta + 1.0 / (2.0 * q)) * norm_W1_2q;
    b.w1_second = std::pow(c.Cq / 2.0, 1.0 / (2.0 * q)) * std::pow(epsilon, -3.0 + 2.0 * delta + 1.0 / (2.0 * q)) *
                  norm_U1_2p * norm_U1_2p;
    b.bound_u1 = b.u1_first + b.u1_second;
    b.bound_w1 = b.w1_first + b.w1_second;
    return b;
}

std::pair<double, double> global_bound_norms(double E0, const AnalysisConstants& c, double p, double q) {
    return {std::pow(2.0 * p * E0 / c.Cq, 1.0 / (2.0 * p)), std::pow(2.0 * q * E0, 1.0 / (2.0 * q))};
}

double bound_g(double f0_L2, double g0_L2, const AnalysisConstants& c, double p, double q) {
    return std::pow(g0_L2, 1.0 / q) + std::pow(c.Cq / 2.0, 1.0 / (2.0 * q)) * std::pow(f0_L2, 2.0 / p);
}

std::vector<double> default_cq_scan() {
    std::vector<double> scan;
    for (int k = -10; k <= 10; ++k) scan.push_back(std::ldexp(1.0, k));
    return scan;
}

bool non_increasing(std::span<const double> series, double relative_slack) {
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i] > series[i - 1] * (1.0 + relative_slack)) return false;
    return true;
}

std::optional<double> find_monotone_cq(std::span<const NormReport> samples, double p, double q, double Cp,
                                       std::span<const double> scan, double relative_slack) {
    std::vector<double> series(samples.size());
    for (double cq : scan) {
        const AnalysisConstants c{Cp, cq};
        for (std::size_t i = 0; i < samples.size(); ++i)
            series[i] = lyapunov_from_norms(samples[i].f_L2, samples[i].g_L2, c, p, q);
        if (non_increasing(series, relative_slack)) return cq;
    }
    return std::nullopt;
}

}  // namespace axisw
