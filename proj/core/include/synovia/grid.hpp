#ifndef SYNOVIA_GRID_HPP
#define SYNOVIA_GRID_HPP

#include <array>
#include <cstddef>
#include <cstdint>

namespace synovia {

/// Uniform periodic grid on [0,1]^dim with a Galerkin cutoff.
///
/// n points per axis (power of two), spacing h = 1/n. The cutoff K bounds
/// the retained integer wavenumbers, |k|_inf <= K, and must satisfy
/// K <= floor(n/3) so that pointwise products of retained modes are
/// alias-free after truncation (2/3 rule).
struct GridSpec {
    int dim = 3;   // 2 or 3
    int n = 8;     // points per axis
    int K = 2;     // spectral cutoff in integer wavenumbers

    double h() const { return 1.0 / static_cast<double>(n); }

    /// Number of physical sample points, n^dim.
    std::size_t points() const {
        std::size_t p = 1;
        for (int d = 0; d < dim; ++d) p *= static_cast<std::size_t>(n);
        return p;
    }

    /// Number of complex coefficients in the half-spectrum layout
    /// (last axis runs 0..n/2).
    std::size_t spectral_points() const {
        std::size_t p = static_cast<std::size_t>(n / 2 + 1);
        for (int d = 0; d < dim - 1; ++d) p *= static_cast<std::size_t>(n);
        return p;
    }

    /// Quadrature weight of one sample, h^dim (the torus has unit volume).
    double cell_volume() const {
        double w = 1.0;
        for (int d = 0; d < dim; ++d) w *= h();
        return w;
    }

    /// Signed integer wavenumber of index i along a full (non-halved) axis.
    int wavenumber(int i) const { return i <= n / 2 ? i : i - n; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Validating constructor; throws InvalidGrid on any precondition failure.
GridSpec make_grid(int dim, int n, int K);

}  // namespace synovia

#endif
