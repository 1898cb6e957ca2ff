#include "synovia/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "synovia/errors.hpp"
#include "synovia/fft.hpp"
#include "synovia/spectral.hpp"

namespace synovia {

namespace {

// |f(x)|^2 at every sample, symmetric components with multiplicity 2.
std::vector<double> magnitude_sq(const Field& f) {
    const std::size_t np = f.grid().points();
    std::vector<double> m(np, 0.0);
    for (int c = 0; c < f.comps(); ++c) {
        const double w = static_cast<double>(f.component_multiplicity(c));
        auto comp = f.component(c);
        for (std::size_t i = 0; i < np; ++i) m[i] += w * comp[i] * comp[i];
    }
    return m;
}

}  // namespace

ScalarField pointwise_magnitude(const Field& f) {
    ScalarField out(f.grid());
    auto m = magnitude_sq(f);
    auto vals = out.mutable_component(0);
    for (std::size_t i = 0; i < m.size(); ++i) vals[i] = std::sqrt(m[i]);
    return out;
}

double lp_norm(const Field& f, double r) {
    if (r < 1.0) throw InvalidParameter("lp_norm: exponent must satisfy r >= 1");
    const auto m = magnitude_sq(f);
    if (r == kInfNorm) {
        double mx = 0.0;
        for (double v : m) mx = std::max(mx, v);
        return std::sqrt(mx);
    }
    const double w = f.grid().cell_volume();
    double acc = 0.0;
    if (r == 2.0) {
        for (double v : m) acc += v;
    } else {
        for (double v : m) acc += std::pow(v, 0.5 * r);
    }
    return std::pow(w * acc, 1.0 / r);
}

double modular(const Field& f, const ScalarField& p_field) {
    if (!(p_field.grid() == f.grid()))
        throw GridMismatch("modular: exponent field lives on a different grid");
    const auto m = magnitude_sq(f);
    auto p = p_field.component(0);
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!(p[i] >= 1.0) || !std::isfinite(p[i]))
            throw InvalidParameter("modular: exponent field must stay in [1, inf)");
        acc += std::pow(m[i], 0.5 * p[i]);
    }
    return acc * f.grid().cell_volume();
}

// Accumulated |D^order f|^2 over all derivative multi-indices (each order
// of differentiation enumerated independently, so mixed partials count
// with their natural multiplicity).
std::vector<double> derivative_magnitude_sq(const Field& f, int order) {
    const GridSpec& g = f.grid();
    const std::size_t np = g.points();
    if (order == 0) return magnitude_sq(f);

    std::vector<double> acc(np, 0.0);
    const std::size_t ns = g.spectral_points();
    std::vector<cplx> dcoeff(ns);
    std::vector<double> dphys(np);

    const double two_pi = 2.0 * std::numbers::pi;
    int k[3];
    auto axis_k = [&](int kk) { return kk == g.n / 2 ? 0 : kk; };

    for (int c = 0; c < f.comps(); ++c) {
        const double mult = static_cast<double>(f.component_multiplicity(c));
        auto base = f.spectral_component(c);
        if (order == 1) {
            for (int a = 0; a < g.dim; ++a) {
                for (std::size_t idx = 0; idx < ns; ++idx) {
                    spectral_wavevector(g, idx, k);
                    dcoeff[idx] = cplx{0.0, two_pi * axis_k(k[a])} * base[idx];
                }
                fft_inverse(g, dcoeff, dphys);
                for (std::size_t i = 0; i < np; ++i) acc[i] += mult * dphys[i] * dphys[i];
            }
        } else {
            for (int a = 0; a < g.dim; ++a) {
                for (int b = 0; b < g.dim; ++b) {
                    for (std::size_t idx = 0; idx < ns; ++idx) {
                        spectral_wavevector(g, idx, k);
                        const double ka = two_pi * axis_k(k[a]);
                        const double kb = two_pi * axis_k(k[b]);
                        dcoeff[idx] = -ka * kb * base[idx];
                    }
                    fft_inverse(g, dcoeff, dphys);
                    for (std::size_t i = 0; i < np; ++i) acc[i] += mult * dphys[i] * dphys[i];
                }
            }
        }
    }
    return acc;
}

double sobolev_seminorm(const Field& f, int kOrder, double r) {
    if (kOrder < 0 || kOrder > 2)
        throw InvalidParameter("sobolev_seminorm: derivative order must be 0, 1 or 2");
    if (r < 1.0) throw InvalidParameter("sobolev_seminorm: exponent must satisfy r >= 1");
    auto m = derivative_magnitude_sq(f, kOrder);
    if (r == kInfNorm) {
        double mx = 0.0;
        for (double v : m) mx = std::max(mx, v);
        return std::sqrt(mx);
    }
    const double w = f.grid().cell_volume();
    double acc = 0.0;
    if (r == 2.0) {
        for (double v : m) acc += v;
    } else {
        for (double v : m) acc += std::pow(v, 0.5 * r);
    }
    return std::pow(w * acc, 1.0 / r);
}

double spectral_energy(const Field& f) {
    const GridSpec& g = f.grid();
    const std::size_t ns = g.spectral_points();
    const auto& coeffs = f.spectral();
    double acc = 0.0;
    for (int c = 0; c < f.comps(); ++c) {
        const double mult = static_cast<double>(f.component_multiplicity(c));
        for (std::size_t idx = 0; idx < ns; ++idx) {
            acc += mult * spectral_weight(g, idx) *
                   std::norm(coeffs[static_cast<std::size_t>(c) * ns + idx]);
        }
    }
    return acc;
}

}  // namespace synovia
