#include "riesz.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "errors.hpp"

namespace axisw {
namespace {

using boost::math::quadrature::tanh_sinh;

constexpr double kQuadTol = 1e-13;

// integrate() is not const-callable in older Boost releases
tanh_sinh<double>& integrator() {
    thread_local tanh_sinh<double> q;
    return q;
}

// x - sin(x) without cancellation for small x.
double x_minus_sin(double x) {
    if (x >= 0.5) return x - std::sin(x);
    const double x2 = x * x;
    double term = x * x2 / 6.0;
    double sum = 0.0;
    for (int n = 1; n < 12; ++n) {
        sum += term;
        term *= -x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
    }
    return sum;
}

// Fraction of the 3-sphere of radius r (in R^4) inside the 4D ball of radius s
// centred at distance c > 0 from the origin; gap = c - s, passed in separately
// because it is computed without cancellation.
double sphere_fraction(double r, double c, double s, double gap) {
    if (r <= -gap) return 1.0;
    if (r >= s + c || r <= gap) return 0.0;
    // half-angle forms of 1 -/+ cos(phi) keep small caps accurate
    const double one_minus = (s + c - r) * (r - gap) / (2.0 * r * c);
    const double one_plus = (r + gap) * (r + c + s) / (2.0 * r * c);
    const double phi = one_minus <= one_plus ? 2.0 * std::asin(std::sqrt(std::max(one_minus, 0.0) / 2.0))
                                             : std::numbers::pi - 2.0 * std::asin(std::sqrt(std::max(one_plus, 0.0) / 2.0));
    // (phi - sin(phi) cos(phi)) / pi
    return x_minus_sin(2.0 * phi) / (2.0 * std::numbers::pi);
}

// Integral over the 5D ball of r^power, up to the common factor 2 pi^2:
// int dz int r^(3 + power) F(r) dr.
double ball_integral(double power, double c, double radius) {
    auto& quad = integrator();
    auto slice = [&](double z) {
        const double s = std::sqrt(std::max(radius * radius - z * z, 0.0));
        if (s <= 0.0) return 0.0;
        if (c == 0.0) return quad.integrate([&](double r) { return std::pow(r, 3.0 + power); }, 0.0, s, kQuadTol);

        const double gap = ((c - radius) * (c + radius) + z * z) / (c + s);  // c - s
        double total = 0.0;
        if (gap < 0.0)  // sphere entirely inside for r < -gap
            total += quad.integrate([&](double r) { return std::pow(r, 3.0 + power); }, 0.0, -gap, kQuadTol);
        const double a = std::abs(gap);
        const double b = s + c;
        auto partial = [&](double r) { return std::pow(r, 3.0 + power) * sphere_fraction(r, c, s, gap); };
        if (a > 0.0 && a < 0.25 * b) {
            // F varies on the scale a near the lower end; integrate in log r
            total += quad.integrate(
                [&](double u) {
                    const double r = std::exp(u);
                    return r * partial(r);
                },
                std::log(a), std::log(b), kQuadTol);
        } else {
            total += quad.integrate(partial, a, b, kQuadTol);
        }
        return total;
    };
    // the slice integrand has a kink where s(z) = c
    if (c > 0.0 && c < radius) {
        const double zk = std::sqrt(radius * radius - c * c);
        return 2.0 * (quad.integrate(slice, 0.0, zk, kQuadTol) + quad.integrate(slice, zk, radius, kQuadTol));
    }
    return 2.0 * quad.integrate(slice, 0.0, radius, kQuadTol);
}

}  // namespace

ApEstimate ap_constant(double alpha, double p, double ball_center_r, double ball_radius) {
    if (!(alpha >= 0.0 && alpha < 4.0)) throw ConfigError("ap_constant: alpha must lie in [0, 4)");
    if (!(p > 1.0)) throw ConfigError("ap_constant: p must exceed 1");
    const double p_conj = p / (p - 1.0);
    if (!(alpha * p_conj / p < 4.0)) throw ConfigError("ap_constant: alpha p'/p must be below 4");
    if (!(ball_radius > 0.0) || !(ball_center_r >= 0.0)) throw ConfigError("ap_constant: invalid ball");

    ApEstimate est;
    est.alpha = alpha;
    est.p = p;
    est.p_conj = p_conj;
    est.ball_center_r = ball_center_r;
    est.ball_radius = ball_radius;

    const double volume = ball_integral(0.0, ball_center_r, ball_radius);
    const double avg_w = ball_integral(-alpha, ball_center_r, ball_radius) / volume;
    // w^(-p'/p) = r^(alpha p'/p)
    const double avg_dual = ball_integral(alpha * p_conj / p, ball_center_r, ball_radius) / volume;
    est.value = avg_w * std::pow(avg_dual, p / p_conj);
    return est;
}

ApSampleSpec default_ap_samples() { return {{0.1, 1.0, 10.0}, {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}}; }

namespace {

std::vector<double> with_geometric_midpoints(const std::vector<double>& v) {
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out.push_back(sorted[i]);
        if (i + 1 < sorted.size() && sorted[i] > 0.0) out.push_back(std::sqrt(sorted[i] * sorted[i + 1]));
    }
    return out;
}

}  // namespace

ApSampleSpec refine(const ApSampleSpec& spec) {
    ApSampleSpec out{with_geometric_midpoints(spec.radii), with_geometric_midpoints(spec.offset_factors)};
    double smallest = 0.0;
    for (double f : spec.offset_factors)
        if (f > 0.0 && (smallest == 0.0 || f < smallest)) smallest = f;
    if (smallest > 0.0) out.offset_factors.push_back(0.5 * smallest);
    std::sort(out.offset_factors.begin(), out.offset_factors.end());
    return out;
}

double ap_supremum(double alpha, double p, const ApSampleSpec& spec) {
    double best = 0.0;
    for (double radius : spec.radii)
        for (double factor : spec.offset_factors)
            best = std::max(best, ap_constant(alpha, p, factor * radius, radius).value);
    return best;
}

double czw_ratio(const ScalarField& w1, double p, const PoissonWorkspace& ws) {
    if (!(p > 1.0)) throw ConfigError("czw_ratio: p must exceed 1");
    if (w1.max_abs() == 0.0) throw UndefinedError("czw_ratio: zero vorticity gives an undefined ratio");
    const ScalarField psi_zz = d2dz2(solve_psi1(w1, ws));
    return weighted_lp_norm(psi_zz, p) / weighted_lp_norm(w1, p);
}

double RandomVorticity::operator()(double r, double z) const {
    double total = 0.0;
    for (const Term& term : terms) {
        const double x = r / term.width;
        const double envelope = std::exp(-x * x);
        double modes = 0.0;
        for (std::size_t k = 0; k < term.amplitudes.size(); ++k)
            modes += term.amplitudes[k] * std::sin(2.0 * std::numbers::pi * static_cast<double>(k + 1) * z);
        total += envelope * modes;
    }
    return total;
}

ScalarField RandomVorticity::sample(const Grid& grid) const {
    return ScalarField::from_function(grid, [this](double r, double z) { return (*this)(r, z); });
}

std::vector<RandomVorticity> random_vorticities(std::size_t count, std::uint64_t seed) {
    constexpr int kTerms = 3;
    constexpr int kModes = 4;
    std::mt19937_64 rng(seed);
    // 53-bit uniform in [0, 1); avoids the implementation-defined std distributions
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<RandomVorticity> fields(count);
    for (auto& field : fields) {
        field.terms.resize(kTerms);
        for (auto& term : field.terms) {
            term.width = 0.3 + 0.7 * uniform();
            term.amplitudes.resize(kModes);
            for (double& a : term.amplitudes) a = 2.0 * uniform() - 1.0;
        }
    }
    return fields;
}

SurveyReport czw_survey(std::size_t sample_count, std::uint64_t seed, const Grid& coarse, const Grid& fine, double p,
                        unsigned threads) {
    SurveyReport report;
    if (sample_count == 0) return report;

    const std::vector<RandomVorticity> fields = random_vorticities(sample_count, seed);
    report.samples.resize(sample_count);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, sample_count));

    auto work = [&](unsigned worker) {
        const PoissonWorkspace ws_coarse(coarse);
        const PoissonWorkspace ws_fine(fine);
        for (std::size_t i = worker; i < sample_count; i += threads) {
            report.samples[i] = {i, czw_ratio(fields[i].sample(coarse), p, ws_coarse),
                                 czw_ratio(fields[i].sample(fine), p, ws_fine)};
        }
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < threads; ++w)
                pool.emplace_back([&, w] {
                    try {
                        work(w);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    for (const auto& s : report.samples) {
        report.max_coarse = std::max(report.max_coarse, s.ratio_coarse);
        report.max_fine = std::max(report.max_fine, s.ratio_fine);
    }
    return report;
}

void write_survey_csv(const SurveyReport& report, std::ostream& out) {
    out << "sample,ratio_coarse,ratio_fine\n" << std::setprecision(17);
    for (const auto& s : report.samples) out << s.index << ',' << s.ratio_coarse << ',' << s.ratio_fine << '\n';
    out << "max," << report.max_coarse << ',' << report.max_fine << '\n';
}

}  // namespace axisw
