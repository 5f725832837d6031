#pragma once

// Initial states for the anisotropic data families. Profiles U1, W1 are
// functions of the rescaled radius rho and of z; the builder stretches them
// according to the family and the (epsilon, delta) parameters.

#include <functional>
#include <string>
#include <vector>

#include "evolution.hpp"
#include "grid.hpp"
#include "poisson.hpp"

namespace axisw {

/// A z-odd, period-1 profile rho, z -> value.
class Profile {
public:
    using Fn = std::function<double(double rho, double z)>;

    /// |value| < 1e-8 for rho > decay_radius.
    Profile(std::string name, Fn fn, double decay_radius);

    double operator()(double rho, double z) const { return fn_(rho, z); }
    const std::string& name() const { return name_; }
    double decay_radius() const { return decay_radius_; }

    static Profile zero();

    /// amplitude * exp(-(rho/width)^2) * sin(2 pi mode z)
    static Profile gaussian_sine(double amplitude = 1.0, double width = 1.0, int mode = 1);

    /// Bilinear interpolation of samples on a tensor grid. rho nodes must be
    /// strictly increasing; the profile is held constant below the first rho
    /// node and is zero beyond the last. z nodes must be strictly increasing
    /// in [0, 1) and are interpolated periodically.
    static Profile tabulated(std::vector<double> rho, std::vector<double> z, std::vector<double> values);

    /// Reads a CSV file with header "rho,z,value" whose rows cover a tensor grid.
    static Profile from_csv(const std::string& path);

private:
    std::string name_;
    Fn fn_;
    double decay_radius_;
};

/// Throws DataError unless profile(rho, z) == -profile(rho, 1 - z) at sampled points.
void verify_z_odd(const Profile& profile, double tolerance = 1e-10);

enum class Family { Data1, Data2, Data3 };

const char* family_name(Family f);
Family parse_family(const std::string& name);

struct InitConfig {
    Family family = Family::Data1;
    double epsilon = 1.0;
    double delta = 0.5;
    double p = 8.0;
    double q = 4.0;
    Profile U1 = Profile::gaussian_sine();
    Profile W1 = Profile::gaussian_sine();
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// p = 2q; q > 1/delta (Data-1, Data-2) or q > 1 (Data-3); parameter ranges.
ValidationReport check_parameters(const InitConfig& cfg);

/// Factor multiplying r inside the profiles: epsilon for Data-1/Data-2,
/// epsilon^delta for Data-3.
double radial_scale(const InitConfig& cfg);

/// The rho-grid sampled by build_initial on `grid`: radius radial_scale * R,
/// same node counts, so rho_j = radial_scale * r_j exactly.
Grid profile_grid(const InitConfig& cfg, const Grid& grid);

/// Samples a profile at the nodes of a rho-grid.
ScalarField sample_profile(const Profile& profile, const Grid& rho_grid);

/// Initial state u1 = eps^delta U1(s r, z), w1 = eps^delta W1(s r, z) with
/// s = radial_scale(cfg). Data-2 runs are the Data-1 solution mapped through
/// Data2Rescaling, so Data-2 builds the Data-1 state.
///
/// Throws ConfigError for parameter violations and DataError for profiles
/// that are not z-odd or that yield non-finite energy. Appends a message to
/// `warnings` (if given) when tail_mass exceeds 1e-6.
State build_initial(const InitConfig& cfg, const Grid& grid, const PoissonWorkspace& ws,
                    std::vector<std::string>* warnings = nullptr);

/// Fraction of the integral of (u1^2 + w1^2) r dr dz carried by the outermost
/// 10% of radial cells.
double tail_mass(const State& s, const Grid& grid);

/// Maps a Data-1 solution (u1, w1)(r, z, t) onto the Data-2 solution
/// u1^eps(r, z, t) = eps^-2 u1(r/eps, z/eps, t/eps^2),
/// w1^eps(r, z, t) = eps^-3 w1(r/eps, z/eps, t/eps^2) on R^2 x [0, eps].
struct Data2Rescaling {
    double epsilon;

    double time(double t_data1) const { return epsilon * epsilon * t_data1; }
    double r(double r_data1) const { return epsilon * r_data1; }
    double z(double z_data1) const { return epsilon * z_data1; }
    double u1(double value) const { return value / (epsilon * epsilon); }
    double w1(double value) const { return value / (epsilon * epsilon * epsilon); }

    /// ||u1^eps||_{L^m(Omega_eps)} from ||u1||_{L^m(Omega)}.
    double u1_norm(double norm, double m) const;
    /// ||w1^eps||_{L^m(Omega_eps)} from ||w1||_{L^m(Omega)}.
    double w1_norm(double norm, double m) const;
};

}  // namespace axisw
