#pragma once

#include "grid.hpp"

namespace axisw {

/// Meridional velocity (v^r, v^z), collocated with the scalar nodes.
struct VelocityField {
    ScalarField vr;
    ScalarField vz;
};

/// v^r = -r d(psi1)/dz, v^z = 2 psi1 + r d(psi1)/dr.
VelocityField compute_velocity(const ScalarField& psi1);

/// (r v^r)_r + (r v^z)_z with the grid operators. Vanishes identically in
/// the continuum for velocities built by compute_velocity.
ScalarField divergence_residual(const VelocityField& v);

}  // namespace axisw
