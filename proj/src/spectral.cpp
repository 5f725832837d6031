#include "spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace axisw {
namespace {

// FFTW's planner is not thread-safe, execution with new-array interfaces is.
// Plans are estimated (never measured) so the same plan is chosen on every run.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plans] : plans_) {
            fftw_destroy_plan(plans.forward);
            fftw_destroy_plan(plans.backward);
        }
    }

    PlanPair get(int Nr, int Nz) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find({Nr, Nz});
        if (it != plans_.end()) return it->second;

        const int modes = Nz / 2 + 1;
        std::vector<double> real(static_cast<std::size_t>(Nr) * Nz);
        std::vector<std::complex<double>> cplx(static_cast<std::size_t>(Nr) * modes);
        auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

        PlanPair plans;
        plans.forward = fftw_plan_many_dft_r2c(1, &Nz, Nr, real.data(), nullptr, 1, Nz, c, nullptr, 1, modes, flags);
        plans.backward = fftw_plan_many_dft_c2r(1, &Nz, Nr, c, nullptr, 1, modes, real.data(), nullptr, 1, Nz, flags);
        plans_.emplace(std::make_pair(Nr, Nz), plans);
        return plans;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

ZSpectrum forward_z(const ScalarField& field) {
    const Grid& g = field.grid();
    ZSpectrum out;
    out.Nr = g.Nr();
    out.Nz = g.Nz();
    out.coeffs.resize(static_cast<std::size_t>(g.Nr()) * out.modes());

    const PlanPair plans = plan_cache().get(g.Nr(), g.Nz());
    // r2c does not modify its input, the cast only satisfies FFTW's signature.
    fftw_execute_dft_r2c(plans.forward, const_cast<double*>(field.values().data()),
                         reinterpret_cast<fftw_complex*>(out.coeffs.data()));

    const double scale = 1.0 / g.Nz();
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

ScalarField backward_z(const ZSpectrum& spectrum, const Grid& grid) {
    ScalarField out(grid);
    const PlanPair plans = plan_cache().get(grid.Nr(), grid.Nz());
    // c2r destroys its input.
    std::vector<std::complex<double>> scratch = spectrum.coeffs;
    fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(scratch.data()), out.values().data());
    return out;
}

}  // namespace axisw
