#include "velocity.hpp"

namespace axisw {

VelocityField compute_velocity(const ScalarField& psi1) {
    ScalarField vr = times_r(ddz(psi1));
    vr *= -1.0;
    ScalarField vz = times_r(ddr(psi1));
    vz.axpy(2.0, psi1);
    return {std::move(vr), std::move(vz)};
}

ScalarField divergence_residual(const VelocityField& v) {
    require_same_grid(v.vr, v.vz, "divergence_residual");
    ScalarField out = ddr(times_r(v.vr));
    out += ddz(times_r(v.vz));
    return out;
}

}  // namespace axisw
