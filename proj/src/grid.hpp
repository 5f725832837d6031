#pragma once

// Cylindrical (r, z) grid with cell-centered radial nodes and periodic axial
// nodes, scalar-field storage, and the differential/quadrature operators that
// act on the reduced variables (u1, w1, psi1).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace axisw {

/// Truncated domain r in (0, R], z in [0, 1) with period 1 in z.
///
/// Radial nodes sit at r_j = (j + 1/2) dr so no sample lies on the axis;
/// axial nodes are z_k = k dz.
class Grid {
public:
    Grid(double R, int Nr, int Nz);

    double R() const { return R_; }
    int Nr() const { return Nr_; }
    int Nz() const { return Nz_; }
    double dr() const { return dr_; }
    double dz() const { return dz_; }
    std::size_t size() const { return static_cast<std::size_t>(Nr_) * static_cast<std::size_t>(Nz_); }

    double r(int j) const { return (j + 0.5) * dr_; }
    double z(int k) const { return k * dz_; }

    /// Index of the node that z-reflection (z -> 1 - z mod 1) maps k onto.
    int mirror_z(int k) const { return (Nz_ - k) % Nz_; }

    bool operator==(const Grid& other) const {
        return R_ == other.R_ && Nr_ == other.Nr_ && Nz_ == other.Nz_;
    }

private:
    double R_;
    int Nr_;
    int Nz_;
    double dr_;
    double dz_;
};

/// Validating factory; throws ConfigError on non-positive R, Nr < 4, Nz < 4 or odd Nz.
Grid make_grid(double R, int Nr, int Nz);

/// Nr x Nz samples stored row-major (r outer, z inner).
class ScalarField {
public:
    explicit ScalarField(const Grid& grid);
    ScalarField(const Grid& grid, std::vector<double> values);

    /// Samples f(r_j, z_k) at every node.
    static ScalarField from_function(const Grid& grid, const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }

    double& operator()(int j, int k) { return values_[index(j, k)]; }
    double operator()(int j, int k) const { return values_[index(j, k)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    std::span<double> row(int j) { return {values_.data() + index(j, 0), static_cast<std::size_t>(grid_.Nz())}; }
    std::span<const double> row(int j) const {
        return {values_.data() + index(j, 0), static_cast<std::size_t>(grid_.Nz())};
    }

    bool all_finite() const;
    double max_abs() const;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

    /// this += s * other
    ScalarField& axpy(double s, const ScalarField& other);

private:
    std::size_t index(int j, int k) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.Nz()) + static_cast<std::size_t>(k);
    }

    Grid grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Pointwise product.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// Pointwise r_j * field.
ScalarField times_r(const ScalarField& field);

/// Throws ConfigError if the two fields live on different grids.
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what);

/// Spectral first z-derivative. The Nyquist mode is dropped.
ScalarField ddz(const ScalarField& field);

/// Spectral second z-derivative, -(2 pi k)^2 on every mode including Nyquist.
ScalarField d2dz2(const ScalarField& field);

/// Second-order centered r-derivative. Even reflection across the axis at
/// j = 0, homogeneous Dirichlet ghost at r = R + dr/2.
ScalarField ddr(const ScalarField& field);

/// d2/dz2 + d2/dr2 + (3/r) d/dr: the axisymmetric Laplacian of R^4 x T^1.
ScalarField laplacian5(const ScalarField& field);

/// Applies only the radial part d2/dr2 + (3/r) d/dr.
ScalarField radial_laplacian5(const ScalarField& field);

/// Midpoint rule for the integral of field * r dr dz over the truncated domain.
double weighted_integral(const ScalarField& field);

/// (integral of |field|^m r dr dz)^(1/m); m >= 1.
double weighted_lp_norm(const ScalarField& field, double m);

/// Max over nodes of |value(r, z) + value(r, 1 - z)|; zero for z-odd fields.
double z_parity_error(const ScalarField& field);

}  // namespace axisw
