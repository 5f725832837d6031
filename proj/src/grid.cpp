#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "spectral.hpp"

namespace axisw {

Grid::Grid(double R, int Nr, int Nz) : R_(R), Nr_(Nr), Nz_(Nz), dr_(R / Nr), dz_(1.0 / Nz) {}

Grid make_grid(double R, int Nr, int Nz) {
    if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("grid: R must be positive and finite");
    if (Nr < 4) throw ConfigError("grid: Nr must be >= 4, got " + std::to_string(Nr));
    if (Nz < 4 || Nz % 2 != 0) throw ConfigError("grid: Nz must be even and >= 4, got " + std::to_string(Nz));
    return Grid(R, Nr, Nz);
}

ScalarField::ScalarField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw ConfigError("field: value count does not match grid");
}

ScalarField ScalarField::from_function(const Grid& grid, const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid.Nr(); ++j) {
        const double r = grid.r(j);
        for (int k = 0; k < grid.Nz(); ++k) out(j, k) = f(r, grid.z(k));
    }
    return out;
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(*this, other, "field addition");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(*this, other, "field subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& other) {
    require_same_grid(*this, other, "field axpy");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "field product");
    ScalarField out(a.grid());
    auto av = a.values();
    auto bv = b.values();
    auto ov = out.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * bv[i];
    return out;
}

ScalarField times_r(const ScalarField& field) {
    ScalarField out = field;
    const Grid& g = field.grid();
    for (int j = 0; j < g.Nr(); ++j) {
        const double r = g.r(j);
        for (double& v : out.row(j)) v *= r;
    }
    return out;
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
    if (!(a.grid() == b.grid())) throw ConfigError(std::string(what) + ": grid mismatch");
}

ScalarField ddz(const ScalarField& field) {
    ZSpectrum s = forward_z(field);
    const int nyquist = s.Nz / 2;
    for (int j = 0; j < s.Nr; ++j) {
        for (int k = 0; k < nyquist; ++k) s.at(j, k) *= std::complex<double>(0.0, wavenumber(k));
        s.at(j, nyquist) = 0.0;
    }
    return backward_z(s, field.grid());
}

ScalarField d2dz2(const ScalarField& field) {
    ZSpectrum s = forward_z(field);
    for (int j = 0; j < s.Nr; ++j)
        for (int k = 0; k < s.modes(); ++k) s.at(j, k) *= -wavenumber(k) * wavenumber(k);
    return backward_z(s, field.grid());
}

namespace {

// Value at radial index j including the two ghost rows.
inline double radial_value(const ScalarField& f, int j, int k) {
    if (j < 0) return f(0, k);                  // even reflection across the axis
    if (j >= f.grid().Nr()) return 0.0;         // Dirichlet far field
    return f(j, k);
}

}  // namespace

ScalarField ddr(const ScalarField& field) {
    const Grid& g = field.grid();
    ScalarField out(g);
    const double inv2dr = 0.5 / g.dr();
    for (int j = 0; j < g.Nr(); ++j)
        for (int k = 0; k < g.Nz(); ++k)
            out(j, k) = (radial_value(field, j + 1, k) - radial_value(field, j - 1, k)) * inv2dr;
    return out;
}

ScalarField radial_laplacian5(const ScalarField& field) {
    const Grid& g = field.grid();
    ScalarField out(g);
    const double inv_dr2 = 1.0 / (g.dr() * g.dr());
    const double inv2dr = 0.5 / g.dr();
    for (int j = 0; j < g.Nr(); ++j) {
        const double three_over_r = 3.0 / g.r(j);
        for (int k = 0; k < g.Nz(); ++k) {
            const double lo = radial_value(field, j - 1, k);
            const double mid = field(j, k);
            const double hi = radial_value(field, j + 1, k);
            out(j, k) = (hi - 2.0 * mid + lo) * inv_dr2 + three_over_r * (hi - lo) * inv2dr;
        }
    }
    return out;
}

ScalarField laplacian5(const ScalarField& field) {
    ScalarField out = d2dz2(field);
    out += radial_laplacian5(field);
    return out;
}

double weighted_integral(const ScalarField& field) {
    const Grid& g = field.grid();
    double total = 0.0;
    for (int j = 0; j < g.Nr(); ++j) {
        double row_sum = 0.0;
        for (double v : field.row(j)) row_sum += v;
        total += row_sum * g.r(j);
    }
    return total * g.dr() * g.dz();
}

double weighted_lp_norm(const ScalarField& field, double m) {
    if (!(m >= 1.0)) throw ConfigError("weighted_lp_norm: exponent must be >= 1");
    ScalarField powered(field.grid());
    auto in = field.values();
    auto out = powered.values();
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::pow(std::abs(in[i]), m);
    return std::pow(weighted_integral(powered), 1.0 / m);
}

double z_parity_error(const ScalarField& field) {
    const Grid& g = field.grid();
    double err = 0.0;
    for (int j = 0; j < g.Nr(); ++j)
        for (int k = 0; k < g.Nz(); ++k) err = std::max(err, std::abs(field(j, k) + field(j, g.mirror_z(k))));
    return err;
}

}  // namespace axisw
