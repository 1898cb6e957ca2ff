#include "synovia/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "synovia/errors.hpp"

namespace synovia {

namespace {

// FFTW's planner is a global, non-thread-safe resource; plan creation is
// serialized while execution runs concurrently on thread-local plans.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanSet {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    std::size_t n_real = 0;
    std::size_t n_cplx = 0;

    PlanSet(int dim, int n) {
        n_real = 1;
        for (int d = 0; d < dim; ++d) n_real *= static_cast<std::size_t>(n);
        n_cplx = n_real / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);

        std::lock_guard<std::mutex> lock(planner_mutex());
        real_buf = fftw_alloc_real(n_real);
        cplx_buf = fftw_alloc_complex(n_cplx);
        if (dim == 2) {
            forward = fftw_plan_dft_r2c_2d(n, n, real_buf, cplx_buf, FFTW_ESTIMATE);
            inverse = fftw_plan_dft_c2r_2d(n, n, cplx_buf, real_buf, FFTW_ESTIMATE);
        } else {
            forward = fftw_plan_dft_r2c_3d(n, n, n, real_buf, cplx_buf, FFTW_ESTIMATE);
            inverse = fftw_plan_dft_c2r_3d(n, n, n, cplx_buf, real_buf, FFTW_ESTIMATE);
        }
    }

    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;

    ~PlanSet() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
        fftw_free(real_buf);
        fftw_free(cplx_buf);
    }
};

PlanSet& plans_for(const GridSpec& grid) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<PlanSet>> cache;
    auto& slot = cache[{grid.dim, grid.n}];
    if (!slot) slot = std::make_unique<PlanSet>(grid.dim, grid.n);
    return *slot;
}

}  // namespace

void fft_forward(const GridSpec& grid, std::span<const double> physical,
                 std::span<cplx> spectral) {
    PlanSet& p = plans_for(grid);
    if (physical.size() != p.n_real || spectral.size() != p.n_cplx)
        throw InvalidParameter("fft_forward: buffer size mismatch");
    std::memcpy(p.real_buf, physical.data(), p.n_real * sizeof(double));
    fftw_execute(p.forward);
    const double scale = 1.0 / static_cast<double>(p.n_real);
    for (std::size_t i = 0; i < p.n_cplx; ++i)
        spectral[i] = cplx{p.cplx_buf[i][0] * scale, p.cplx_buf[i][1] * scale};
}

void fft_inverse(const GridSpec& grid, std::span<const cplx> spectral,
                 std::span<double> physical) {
    PlanSet& p = plans_for(grid);
    if (physical.size() != p.n_real || spectral.size() != p.n_cplx)
        throw InvalidParameter("fft_inverse: buffer size mismatch");
    for (std::size_t i = 0; i < p.n_cplx; ++i) {
        p.cplx_buf[i][0] = spectral[i].real();
        p.cplx_buf[i][1] = spectral[i].imag();
    }
    fftw_execute(p.inverse);
    std::memcpy(physical.data(), p.real_buf, p.n_real * sizeof(double));
}

void spectral_wavevector(const GridSpec& grid, std::size_t idx, int k[3]) {
    const int n = grid.n;
    const int nh = n / 2 + 1;
    k[0] = k[1] = k[2] = 0;
    if (grid.dim == 2) {
        k[1] = static_cast<int>(idx % static_cast<std::size_t>(nh));
        k[0] = grid.wavenumber(static_cast<int>(idx / static_cast<std::size_t>(nh)));
    } else {
        k[2] = static_cast<int>(idx % static_cast<std::size_t>(nh));
        const std::size_t rest = idx / static_cast<std::size_t>(nh);
        k[1] = grid.wavenumber(static_cast<int>(rest % static_cast<std::size_t>(n)));
        k[0] = grid.wavenumber(static_cast<int>(rest / static_cast<std::size_t>(n)));
    }
}

int spectral_weight(const GridSpec& grid, std::size_t idx) {
    const int nh = grid.n / 2 + 1;
    const int klast = static_cast<int>(idx % static_cast<std::size_t>(nh));
    return (klast == 0 || klast == grid.n / 2) ? 1 : 2;
}

}  // namespace synovia
