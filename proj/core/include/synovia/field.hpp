#ifndef SYNOVIA_FIELD_HPP
#define SYNOVIA_FIELD_HPP

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "synovia/grid.hpp"

namespace synovia {

using cplx = std::complex<double>;

enum class FieldKind : int { Scalar = 0, Vector = 1, Tensor = 2, SymTensor = 3 };

/// Number of independent components of a symmetric dim x dim tensor.
inline int sym_components(int dim) { return dim * (dim + 1) / 2; }

/// Index of entry (i,j), i<=j, in the packed upper-triangle layout.
/// 2D: (00),(01),(11).  3D: (00),(01),(02),(11),(12),(22).
int sym_index(int dim, int i, int j);

/// 1 for a diagonal packed component, 2 for an off-diagonal one (its
/// mirror image is not stored).
int sym_multiplicity(int dim, int comp);

/// Periodic sampled field with `comps` scalar components on a GridSpec.
///
/// Physical samples are authoritative and stored component-major,
/// row-major within a component (last axis fastest). A half-spectrum
/// cache of complex coefficients (conjugate-symmetric, FFTW r2c layout,
/// scaled so that f(x) = sum_k fhat(k) e^{2 pi i k.x}) is computed
/// lazily and kept consistent: mutating physical values drops the cache,
/// and assigning spectral data synthesizes fresh physical values.
class Field {
  public:
    Field() = default;
    Field(const GridSpec& grid, int comps, FieldKind kind);

    const GridSpec& grid() const { return grid_; }
    int comps() const { return comps_; }
    FieldKind kind() const { return kind_; }

    /// 2 for packed off-diagonal symmetric components, else 1; used by
    /// Frobenius magnitudes and Parseval sums.
    int component_multiplicity(int c) const;

    const std::vector<double>& values() const { return values_; }
    std::span<const double> component(int c) const;
    std::span<double> mutable_component(int c);
    std::vector<double>& mutable_values();

    double& at(int c, std::size_t idx);
    double at(int c, std::size_t idx) const { return values_[static_cast<std::size_t>(c) * grid_.points() + idx]; }

    /// Half-spectrum coefficients, all components concatenated.
    /// Computed from the physical samples on first use.
    const std::vector<cplx>& spectral() const;
    std::span<const cplx> spectral_component(int c) const;

    /// Overwrite from spectral coefficients; physical values are
    /// synthesized immediately so both views stay consistent.
    void assign_spectral(std::vector<cplx> coeffs);

    bool has_spectral_cache() const { return spectral_valid_; }
    bool is_finite() const;

    /// Mean of one component over the torus.
    double component_mean(int c) const;

  protected:
    GridSpec grid_;
    int comps_ = 0;
    FieldKind kind_ = FieldKind::Scalar;
    std::vector<double> values_;
    mutable std::vector<cplx> spectral_;
    mutable bool spectral_valid_ = false;
};

class ScalarField : public Field {
  public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid) : Field(grid, 1, FieldKind::Scalar) {}

    double mean() const { return component_mean(0); }
};

class VectorField : public Field {
  public:
    VectorField() = default;
    explicit VectorField(const GridSpec& grid) : Field(grid, grid.dim, FieldKind::Vector) {}
};

/// Full (generally non-symmetric) rank-2 tensor field; entry (i,j) is
/// component i*dim+j. Produced by spectral_gradient of a vector field,
/// with the convention (grad v)_{ij} = d v_i / d x_j.
class TensorField : public Field {
  public:
    TensorField() = default;
    explicit TensorField(const GridSpec& grid)
        : Field(grid, grid.dim * grid.dim, FieldKind::Tensor) {}
};

/// Symmetric rank-2 tensor field, packed upper triangle.
class SymTensorField : public Field {
  public:
    SymTensorField() = default;
    explicit SymTensorField(const GridSpec& grid)
        : Field(grid, sym_components(grid.dim), FieldKind::SymTensor) {}

    double entry(int i, int j, std::size_t idx) const {
        return at(sym_index(grid_.dim, i, j), idx);
    }
};

/// Point in the torus; unused trailing coordinates are zero in 2D.
using Point = std::array<double, 3>;

/// Coordinates of sample `idx` of a grid (component-local index).
Point grid_point(const GridSpec& grid, std::size_t idx);

ScalarField sample_scalar(const GridSpec& grid, const std::function<double(const Point&)>& f);
VectorField sample_vector(const GridSpec& grid,
                          const std::function<std::array<double, 3>(const Point&)>& f);

}  // namespace synovia

#endif
