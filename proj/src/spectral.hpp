#pragma once

// Batched real-to-complex transforms along z for every radial row of a field.
// Backed by FFTW; plans are cached per (Nr, Nz) and shared by all callers.

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "grid.hpp"

namespace axisw {

/// Spectral coefficients of a field: Nr rows of Nz/2 + 1 complex modes.
/// Coefficients are normalized so that backward(forward(f)) == f.
struct ZSpectrum {
    int Nr = 0;
    int Nz = 0;
    std::vector<std::complex<double>> coeffs;

    int modes() const { return Nz / 2 + 1; }
    std::complex<double>& at(int j, int k) { return coeffs[static_cast<std::size_t>(j) * modes() + k]; }
    std::complex<double> at(int j, int k) const { return coeffs[static_cast<std::size_t>(j) * modes() + k]; }
};

ZSpectrum forward_z(const ScalarField& field);
ScalarField backward_z(const ZSpectrum& spectrum, const Grid& grid);

/// Physical wavenumber 2 pi k of mode index k.
inline double wavenumber(int k) { return 2.0 * std::numbers::pi * k; }

}  // namespace axisw
