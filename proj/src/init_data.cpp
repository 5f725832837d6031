#include "init_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace axisw {

Profile::Profile(std::string name, Fn fn, double decay_radius)
    : name_(std::move(name)), fn_(std::move(fn)), decay_radius_(decay_radius) {
    if (!fn_) throw ConfigError("profile '" + name_ + "': empty evaluator");
    if (!(decay_radius_ > 0.0)) throw ConfigError("profile '" + name_ + "': decay radius must be positive");
}

Profile Profile::zero() {
    return Profile("zero", [](double, double) { return 0.0; }, 1.0);
}

Profile Profile::gaussian_sine(double amplitude, double width, int mode) {
    if (!(width > 0.0)) throw ConfigError("gaussian_sine: width must be positive");
    if (mode < 1) throw ConfigError("gaussian_sine: mode must be >= 1");
    // exp(-x^2) < 1e-8 / |A| once x^2 > ln(|A| 1e8)
    const double level = std::max(std::log(std::max(std::abs(amplitude), 1e-300) * 1e8), 1.0);
    const double decay = width * std::sqrt(level);
    const double k = 2.0 * std::numbers::pi * mode;
    return Profile(
        "gaussian_sine",
        [=](double rho, double z) {
            const double x = rho / width;
            return amplitude * std::exp(-x * x) * std::sin(k * z);
        },
        decay);
}

namespace {

struct Table {
    std::vector<double> rho;
    std::vector<double> z;
    std::vector<double> values;  // rho outer, z inner

    double at(std::size_t i, std::size_t k) const { return values[i * z.size() + k]; }

    double operator()(double r, double zz) const {
        if (r > rho.back()) return 0.0;
        double zw = zz - std::floor(zz);

        std::size_t i = 0;
        double tr = 0.0;
        if (r > rho.front()) {
            i = static_cast<std::size_t>(std::upper_bound(rho.begin(), rho.end(), r) - rho.begin()) - 1;
            if (i + 1 >= rho.size()) i = rho.size() - 2;
            tr = (r - rho[i]) / (rho[i + 1] - rho[i]);
        }

        // periodic bracket in z
        std::size_t k0;
        double z0, z1;
        if (zw < z.front()) {
            k0 = z.size() - 1;
            z0 = z.back() - 1.0;
            z1 = z.front();
        } else {
            k0 = static_cast<std::size_t>(std::upper_bound(z.begin(), z.end(), zw) - z.begin()) - 1;
            z0 = z[k0];
            z1 = (k0 + 1 < z.size()) ? z[k0 + 1] : z.front() + 1.0;
        }
        const std::size_t k1 = (k0 + 1) % z.size();
        const double tz = (zw - z0) / (z1 - z0);

        const double a = (1.0 - tz) * at(i, k0) + tz * at(i, k1);
        const double b = (1.0 - tz) * at(i + 1, k0) + tz * at(i + 1, k1);
        return (1.0 - tr) * a + tr * b;
    }
};

}  // namespace

Profile Profile::tabulated(std::vector<double> rho, std::vector<double> z, std::vector<double> values) {
    if (rho.size() < 2 || z.size() < 2) throw ConfigError("tabulated profile: need at least 2 rho and 2 z nodes");
    if (values.size() != rho.size() * z.size()) throw ConfigError("tabulated profile: value count mismatch");
    if (!std::is_sorted(rho.begin(), rho.end()) || std::adjacent_find(rho.begin(), rho.end()) != rho.end())
        throw ConfigError("tabulated profile: rho nodes must be strictly increasing");
    if (!std::is_sorted(z.begin(), z.end()) || std::adjacent_find(z.begin(), z.end()) != z.end() ||
        z.front() < 0.0 || z.back() >= 1.0)
        throw ConfigError("tabulated profile: z nodes must be strictly increasing in [0, 1)");
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
        throw DataError("tabulated profile: non-finite sample");

    const double decay = rho.back();
    auto table = std::make_shared<const Table>(Table{std::move(rho), std::move(z), std::move(values)});
    return Profile("table", [table](double r, double zz) { return (*table)(r, zz); }, decay);
}

Profile Profile::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("profile table: cannot open '" + path + "'");

    std::string line;
    std::getline(in, line);
    if (line.rfind("rho,z,value", 0) != 0) throw ConfigError(path + ":1: expected header 'rho,z,value'");

    std::map<std::pair<double, double>, double> samples;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        double r = 0, zz = 0, v = 0;
        char c1 = 0, c2 = 0;
        if (!(row >> r >> c1 >> zz >> c2 >> v) || c1 != ',' || c2 != ',')
            throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed row");
        samples[{r, zz}] = v;
    }

    std::vector<double> rho, z;
    for (const auto& [key, v] : samples) {
        rho.push_back(key.first);
        z.push_back(key.second);
    }
    std::sort(rho.begin(), rho.end());
    rho.erase(std::unique(rho.begin(), rho.end()), rho.end());
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());

    std::vector<double> values;
    values.reserve(rho.size() * z.size());
    for (double r : rho)
        for (double zz : z) {
            auto it = samples.find({r, zz});
            if (it == samples.end()) throw ConfigError(path + ": samples do not cover a tensor grid");
            values.push_back(it->second);
        }
    return tabulated(std::move(rho), std::move(z), std::move(values));
}

void verify_z_odd(const Profile& profile, double tolerance) {
    constexpr int kRho = 9;
    constexpr int kZ = 16;
    double scale = 0.0;
    double worst = 0.0;
    for (int i = 0; i < kRho; ++i) {
        const double rho = profile.decay_radius() * i / (kRho - 1);
        for (int k = 0; k < kZ; ++k) {
            const double z = (k + 0.37) / kZ;
            const double a = profile(rho, z);
            const double b = profile(rho, 1.0 - z);
            const double c = profile(rho, z + 1.0);
            scale = std::max(scale, std::abs(a));
            worst = std::max({worst, std::abs(a + b), std::abs(a - c)});
        }
    }
    if (worst > tolerance * std::max(scale, 1.0))
        throw DataError("profile '" + profile.name() + "' is not z-odd and 1-periodic (defect " +
                        std::to_string(worst) + ")");
}

const char* family_name(Family f) {
    switch (f) {
        case Family::Data1: return "data1";
        case Family::Data2: return "data2";
        case Family::Data3: return "data3";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    std::string n;
    for (char c : name)
        if (c != '-' && c != '_') n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (n == "data1") return Family::Data1;
    if (n == "data2") return Family::Data2;
    if (n == "data3") return Family::Data3;
    throw ConfigError("unknown data family '" + name + "' (expected data1, data2 or data3)");
}

ValidationReport check_parameters(const InitConfig& cfg) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) fail("epsilon must lie in (0, 1]");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) fail("delta must lie in (0, 1)");
    if (!(cfg.q > 0.0)) fail("q must be positive");
    if (std::abs(cfg.p - 2.0 * cfg.q) > 1e-12 * std::max(1.0, std::abs(cfg.p))) fail("p must equal 2q");

    if (cfg.family == Family::Data3) {
        if (!(cfg.q > 1.0)) fail("q must exceed 1 for data3");
    } else if (cfg.delta > 0.0 && !(cfg.q > 1.0 / cfg.delta)) {
        fail("q must exceed 1/delta for " + std::string(family_name(cfg.family)));
    }
    return report;
}

double radial_scale(const InitConfig& cfg) {
    return cfg.family == Family::Data3 ? std::pow(cfg.epsilon, cfg.delta) : cfg.epsilon;
}

Grid profile_grid(const InitConfig& cfg, const Grid& grid) {
    return make_grid(radial_scale(cfg) * grid.R(), grid.Nr(), grid.Nz());
}

ScalarField sample_profile(const Profile& profile, const Grid& rho_grid) {
    return ScalarField::from_function(rho_grid, [&](double rho, double z) { return profile(rho, z); });
}

State build_initial(const InitConfig& cfg, const Grid& grid, const PoissonWorkspace& ws,
                    std::vector<std::string>* warnings) {
    const ValidationReport report = check_parameters(cfg);
    if (!report.ok()) {
        std::string msg = "initial data parameters:";
        for (const auto& v : report.violations) msg += " " + v + ";";
        throw ConfigError(msg);
    }
    if (!(ws.grid() == grid)) throw ConfigError("build_initial: workspace grid does not match");
    verify_z_odd(cfg.U1);
    verify_z_odd(cfg.W1);

    const double s = radial_scale(cfg);
    const double amp = std::pow(cfg.epsilon, cfg.delta);
    ScalarField u1 = ScalarField::from_function(grid, [&](double r, double z) { return amp * cfg.U1(s * r, z); });
    ScalarField w1 = ScalarField::from_function(grid, [&](double r, double z) { return amp * cfg.W1(s * r, z); });
    if (!u1.all_finite() || !w1.all_finite()) throw DataError("build_initial: profile produced non-finite samples");

    State state = make_state(0.0, std::move(u1), std::move(w1), ws);

    // Velocity L2 check on the truncated domain.
    ScalarField energy = multiply(state.vel.vr, state.vel.vr);
    energy += multiply(state.vel.vz, state.vel.vz);
    const ScalarField swirl = state.u_theta();
    energy += multiply(swirl, swirl);
    if (!std::isfinite(weighted_integral(energy))) throw DataError("build_initial: initial velocity is not in L2");

    const double tail = tail_mass(state, grid);
    if (warnings && tail > 1e-6) {
        warnings->push_back("tail mass " + std::to_string(tail) +
                            " exceeds 1e-6; increase R so the profiles decay inside the domain");
    }
    return state;
}

double tail_mass(const State& s, const Grid& grid) {
    const int outer = std::max(1, static_cast<int>(std::lround(0.1 * grid.Nr())));
    const int first_outer = grid.Nr() - outer;
    double total = 0.0;
    double tail = 0.0;
    for (int j = 0; j < grid.Nr(); ++j) {
        double row = 0.0;
        for (int k = 0; k < grid.Nz(); ++k) row += s.u1(j, k) * s.u1(j, k) + s.w1(j, k) * s.w1(j, k);
        row *= grid.r(j);
        total += row;
        if (j >= first_outer) tail += row;
    }
    return total > 0.0 ? tail / total : 0.0;
}

double Data2Rescaling::u1_norm(double norm, double m) const { return std::pow(epsilon, -2.0 + 3.0 / m) * norm; }

double Data2Rescaling::w1_norm(double norm, double m) const { return std::pow(epsilon, -3.0 + 3.0 / m) * norm; }

}  // namespace axisw
