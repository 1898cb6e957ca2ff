#include "synovia/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "synovia/errors.hpp"
#include "synovia/fft.hpp"

namespace synovia {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(const Field& f, const char* what) {
    if (!f.is_finite()) throw NonFinite(std::string(what) + ": field contains NaN/Inf");
}

// Wavenumber used in odd-order derivatives: the Nyquist mode has no
// representable sine component, so its derivative is dropped.
inline int deriv_k(const GridSpec& grid, int k) {
    return (k == grid.n / 2) ? 0 : k;
}

// ik-multiplied copy of one spectral component along axis `axis`.
void derivative_coeffs(const GridSpec& grid, std::span<const cplx> in, int axis,
                       std::span<cplx> out) {
    int k[3];
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        spectral_wavevector(grid, idx, k);
        const double kk = static_cast<double>(deriv_k(grid, k[axis]));
        out[idx] = cplx{0.0, kTwoPi * kk} * in[idx];
    }
}

}  // namespace

VectorField spectral_gradient(const ScalarField& f) {
    require_finite(f, "spectral_gradient");
    const GridSpec& g = f.grid();
    const std::size_t ns = g.spectral_points();
    auto in = f.spectral_component(0);
    std::vector<cplx> coeffs(static_cast<std::size_t>(g.dim) * ns);
    for (int d = 0; d < g.dim; ++d)
        derivative_coeffs(g, in, d, {coeffs.data() + static_cast<std::size_t>(d) * ns, ns});
    VectorField out(g);
    out.assign_spectral(std::move(coeffs));
    return out;
}

TensorField spectral_gradient(const VectorField& v) {
    require_finite(v, "spectral_gradient");
    const GridSpec& g = v.grid();
    const std::size_t ns = g.spectral_points();
    std::vector<cplx> coeffs(static_cast<std::size_t>(g.dim * g.dim) * ns);
    for (int i = 0; i < g.dim; ++i) {
        auto in = v.spectral_component(i);
        for (int j = 0; j < g.dim; ++j) {
            const std::size_t c = static_cast<std::size_t>(i * g.dim + j);
            derivative_coeffs(g, in, j, {coeffs.data() + c * ns, ns});
        }
    }
    TensorField out(g);
    out.assign_spectral(std::move(coeffs));
    return out;
}

SymTensorField sym_gradient(const VectorField& v) {
    require_finite(v, "sym_gradient");
    const GridSpec& g = v.grid();
    const std::size_t ns = g.spectral_points();
    std::vector<cplx> coeffs(static_cast<std::size_t>(sym_components(g.dim)) * ns);
    std::vector<cplx> di(ns), dj(ns);
    for (int i = 0; i < g.dim; ++i) {
        for (int j = i; j < g.dim; ++j) {
            derivative_coeffs(g, v.spectral_component(i), j, di);
            derivative_coeffs(g, v.spectral_component(j), i, dj);
            const std::size_t c = static_cast<std::size_t>(sym_index(g.dim, i, j));
            for (std::size_t idx = 0; idx < ns; ++idx)
                coeffs[c * ns + idx] = 0.5 * (di[idx] + dj[idx]);
        }
    }
    SymTensorField out(g);
    out.assign_spectral(std::move(coeffs));
    return out;
}

ScalarField divergence(const VectorField& v) {
    require_finite(v, "divergence");
    const GridSpec& g = v.grid();
    const std::size_t ns = g.spectral_points();
    std::vector<cplx> coeffs(ns, cplx{0.0, 0.0});
    std::vector<cplx> tmp(ns);
    for (int d = 0; d < g.dim; ++d) {
        derivative_coeffs(g, v.spectral_component(d), d, tmp);
        for (std::size_t idx = 0; idx < ns; ++idx) coeffs[idx] += tmp[idx];
    }
    ScalarField out(g);
    out.assign_spectral(std::move(coeffs));
    return out;
}

VectorField divergence(const SymTensorField& T) {
    require_finite(T, "divergence");
    const GridSpec& g = T.grid();
    const std::size_t ns = g.spectral_points();
    std::vector<cplx> coeffs(static_cast<std::size_t>(g.dim) * ns, cplx{0.0, 0.0});
    std::vector<cplx> tmp(ns);
    for (int i = 0; i < g.dim; ++i) {
        for (int j = 0; j < g.dim; ++j) {
            derivative_coeffs(g, T.spectral_component(sym_index(g.dim, i, j)), j, tmp);
            for (std::size_t idx = 0; idx < ns; ++idx)
                coeffs[static_cast<std::size_t>(i) * ns + idx] += tmp[idx];
        }
    }
    VectorField out(g);
    out.assign_spectral(std::move(coeffs));
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    require_finite(f, "laplacian");
    const GridSpec& g = f.grid();
    auto in = f.spectral_component(0);
    std::vector<cplx> coeffs(in.begin(), in.end());
    int k[3];
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        spectral_wavevector(g, idx, k);
        const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
                          static_cast<double>(k[2]) * k[2];
        coeffs[idx] *= -kTwoPi * kTwoPi * k2;
    }
    ScalarField out(g);
    out.assign_spectral(std::move(coeffs));
    return out;
}

VectorField leray_project(const VectorField& v) {
    require_finite(v, "leray_project");
    const GridSpec& g = v.grid();
    const std::size_t ns = g.spectral_points();
    std::vector<cplx> coeffs(v.spectral());
    int k[3];
    for (std::size_t idx = 0; idx < ns; ++idx) {
        spectral_wavevector(g, idx, k);
        const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
                          static_cast<double>(k[2]) * k[2];
        if (k2 == 0.0) {
            for (int d = 0; d < g.dim; ++d) coeffs[static_cast<std::size_t>(d) * ns + idx] = 0.0;
            continue;
        }
        cplx kdotv{0.0, 0.0};
        for (int d = 0; d < g.dim; ++d)
            kdotv += static_cast<double>(k[d]) * coeffs[static_cast<std::size_t>(d) * ns + idx];
        for (int d = 0; d < g.dim; ++d)
            coeffs[static_cast<std::size_t>(d) * ns + idx] -= static_cast<double>(k[d]) * kdotv / k2;
    }
    VectorField out(g);
    out.assign_spectral(std::move(coeffs));
    return out;
}

namespace detail {

// Unchecked sharp cutoff used internally for dealiasing at n/3 even when
// the grid's Galerkin cutoff K is smaller.
void sharp_cutoff(const GridSpec& grid, std::vector<cplx>& coeffs, int comps, int K) {
    const std::size_t ns = grid.spectral_points();
    int k[3];
    for (std::size_t idx = 0; idx < ns; ++idx) {
        spectral_wavevector(grid, idx, k);
        const int kmax = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
        if (kmax > K) {
            for (int c = 0; c < comps; ++c) coeffs[static_cast<std::size_t>(c) * ns + idx] = 0.0;
        }
    }
}

}  // namespace detail

namespace {

template <typename F>
F truncate_impl(const F& f, int K) {
    if (K < 1 || K > f.grid().K)
        throw InvalidGrid("truncate: K must satisfy 1 <= K <= grid.K");
    std::vector<cplx> coeffs(f.spectral());
    detail::sharp_cutoff(f.grid(), coeffs, f.comps(), K);
    F out(f.grid());
    out.assign_spectral(std::move(coeffs));
    return out;
}

}  // namespace

ScalarField truncate(const ScalarField& f, int K) { return truncate_impl(f, K); }
VectorField truncate(const VectorField& v, int K) { return truncate_impl(v, K); }
SymTensorField truncate(const SymTensorField& T, int K) { return truncate_impl(T, K); }

double spectral_divergence_rel(const VectorField& v) {
    const GridSpec& g = v.grid();
    const std::size_t ns = g.spectral_points();
    const auto& coeffs = v.spectral();
    int k[3];
    double num = 0.0, den = 0.0;
    for (std::size_t idx = 0; idx < ns; ++idx) {
        spectral_wavevector(g, idx, k);
        cplx kdotv{0.0, 0.0};
        double vmag2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const cplx vd = coeffs[static_cast<std::size_t>(d) * ns + idx];
            kdotv += static_cast<double>(k[d]) * vd;
            vmag2 += std::norm(vd);
        }
        const double kmag = std::sqrt(static_cast<double>(k[0]) * k[0] +
                                      static_cast<double>(k[1]) * k[1] +
                                      static_cast<double>(k[2]) * k[2]);
        num = std::max(num, std::abs(kdotv));
        den = std::max(den, kmag * std::sqrt(vmag2));
    }
    return den > 0.0 ? num / den : 0.0;
}

ScalarField mollify(const ScalarField& c, double delta) {
    if (delta < 0.0) throw InvalidParameter("mollify: delta must be >= 0");
    if (delta == 0.0) return c;
    const GridSpec& g = c.grid();
    auto in = c.spectral_component(0);
    std::vector<cplx> coeffs(in.begin(), in.end());
    int k[3];
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        spectral_wavevector(g, idx, k);
        const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
                          static_cast<double>(k[2]) * k[2];
        coeffs[idx] *= std::exp(-0.5 * delta * delta * kTwoPi * kTwoPi * k2);
    }
    ScalarField out(g);
    out.assign_spectral(std::move(coeffs));
    return out;
}

namespace {

template <typename F>
F refine_impl(const F& f, const GridSpec& fine) {
    const GridSpec& g = f.grid();
    if (fine.dim != g.dim || fine.n < g.n)
        throw InvalidGrid("refine_to: target grid must share dim and be at least as fine");
    const std::size_t ns_c = g.spectral_points();
    const std::size_t ns_f = fine.spectral_points();
    std::vector<cplx> coeffs(static_cast<std::size_t>(f.comps()) * ns_f, cplx{0.0, 0.0});

    const int nh_f = fine.n / 2 + 1;
    auto fine_index = [&](const int k[3]) -> std::size_t {
        auto wrap = [&](int kk) { return kk >= 0 ? kk : kk + fine.n; };
        if (fine.dim == 2)
            return static_cast<std::size_t>(wrap(k[0])) * nh_f + static_cast<std::size_t>(k[1]);
        return (static_cast<std::size_t>(wrap(k[0])) * fine.n + static_cast<std::size_t>(wrap(k[1]))) *
                   nh_f +
               static_cast<std::size_t>(k[2]);
    };

    int k[3];
    for (std::size_t idx = 0; idx < ns_c; ++idx) {
        spectral_wavevector(g, idx, k);
        // drop coarse Nyquist planes; exact for fields resolved below n/2
        bool nyquist = false;
        for (int d = 0; d < g.dim; ++d)
            if (std::abs(k[d]) == g.n / 2) nyquist = true;
        if (nyquist) continue;
        const std::size_t fi = fine_index(k);
        for (int c = 0; c < f.comps(); ++c)
            coeffs[static_cast<std::size_t>(c) * ns_f + fi] =
                f.spectral()[static_cast<std::size_t>(c) * ns_c + idx];
    }
    F out(fine);
    out.assign_spectral(std::move(coeffs));
    return out;
}

}  // namespace

ScalarField refine_to(const ScalarField& f, const GridSpec& fine) { return refine_impl(f, fine); }
VectorField refine_to(const VectorField& v, const GridSpec& fine) { return refine_impl(v, fine); }

double spectral_tail_fraction(const Field& f) {
    const GridSpec& g = f.grid();
    const std::size_t ns = g.spectral_points();
    const auto& coeffs = f.spectral();
    int k[3];
    double peak = 0.0, tail = 0.0;
    for (std::size_t idx = 0; idx < ns; ++idx) {
        spectral_wavevector(g, idx, k);
        const int kmax = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
        double mag = 0.0;
        for (int c = 0; c < f.comps(); ++c)
            mag = std::max(mag, std::abs(coeffs[static_cast<std::size_t>(c) * ns + idx]));
        peak = std::max(peak, mag);
        if (kmax > g.n / 3) tail = std::max(tail, mag);
    }
    return peak > 0.0 ? tail / peak : 0.0;
}

}  // namespace synovia
