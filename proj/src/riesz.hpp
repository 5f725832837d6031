#pragma once

// Numerical probes of the weighted estimates behind the Poisson problem in
// R^4 x T^1: the A_p quantity of the power weight w = r^(-alpha) over 5D balls,
// and the weighted ratio ||psi1_zz|| / ||w1|| in the measure r dr dz.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "grid.hpp"
#include "poisson.hpp"

namespace axisw {

struct ApEstimate {
    double alpha = 0.0;
    double p = 2.0;
    double p_conj = 2.0;
    double ball_center_r = 0.0;  // distance of the ball centre from the axis
    double ball_radius = 1.0;
    double value = 1.0;
};

/// (avg_B w) (avg_B w^(-p'/p))^(p/p') for w = r^(-alpha) and the 5D ball B of
/// the given radius centred at distance ball_center_r from the axis. The 5D
/// integrals are reduced to (r, z) quadrature with measure r^3 dr dz times the
/// fraction of each 3-sphere of radius r lying inside the ball.
///
/// Throws ConfigError unless 0 <= alpha < 4, p > 1, alpha p'/p < 4, radius > 0
/// and ball_center_r >= 0.
ApEstimate ap_constant(double alpha, double p, double ball_center_r, double ball_radius);

/// Balls probed by ap_supremum: every radius combined with every centre offset
/// factor (centre distance = factor * radius).
struct ApSampleSpec {
    std::vector<double> radii;
    std::vector<double> offset_factors;
};

/// radii {0.1, 1, 10}, offsets {0, 0.5, 1, 2, 4, 8}
ApSampleSpec default_ap_samples();

/// Inserts geometric midpoints between neighbouring radii and offsets (and
/// half the smallest non-zero offset), roughly doubling the sample set.
ApSampleSpec refine(const ApSampleSpec& spec);

/// Largest ap_constant over the sample set: a lower bound on the A_p constant.
double ap_supremum(double alpha, double p, const ApSampleSpec& spec);

/// ||psi1_zz|| / ||w1|| in the weighted L^p norm with measure r dr dz, psi1
/// solved from w1. Throws UndefinedError for w1 == 0.
double czw_ratio(const ScalarField& w1, double p, const PoissonWorkspace& ws);

/// Random band-limited, z-odd vorticity: a sum of Gaussian radial envelopes
/// with randomized widths times sin(2 pi k z), k = 1..4.
struct RandomVorticity {
    struct Term {
        double width;
        std::vector<double> amplitudes;  // one per z-mode
    };
    std::vector<Term> terms;

    double operator()(double r, double z) const;
    ScalarField sample(const Grid& grid) const;
};

/// Deterministic sequence of random fields for a seed.
std::vector<RandomVorticity> random_vorticities(std::size_t count, std::uint64_t seed);

struct SurveySample {
    std::size_t index = 0;
    double ratio_coarse = 0.0;
    double ratio_fine = 0.0;
};

struct SurveyReport {
    std::vector<SurveySample> samples;
    double max_coarse = 0.0;
    double max_fine = 0.0;
};

/// Evaluates czw_ratio for `sample_count` random fields on both grids.
/// Samples are spread over `threads` workers (0 = hardware concurrency) and
/// merged by index, so the report does not depend on the thread count.
SurveyReport czw_survey(std::size_t sample_count, std::uint64_t seed, const Grid& coarse, const Grid& fine, double p,
                        unsigned threads = 1);

/// sample,ratio_coarse,ratio_fine rows followed by a "max" summary row.
void write_survey_csv(const SurveyReport& report, std::ostream& out);

}  // namespace axisw
