#ifndef SYNOVIA_SPECTRAL_HPP
#define SYNOVIA_SPECTRAL_HPP

#include "synovia/field.hpp"

namespace synovia {

/// Exact derivative of the trigonometric interpolant. Nyquist modes are
/// dropped (they carry no representable odd derivative).
VectorField spectral_gradient(const ScalarField& f);
TensorField spectral_gradient(const VectorField& v);

/// Dv = (grad v + grad v^T) / 2.
SymTensorField sym_gradient(const VectorField& v);

ScalarField divergence(const VectorField& v);
VectorField divergence(const SymTensorField& T);

ScalarField laplacian(const ScalarField& f);

/// L^2-orthogonal projection onto divergence-free, mean-zero fields:
/// vhat(k) -> vhat(k) - k (k.vhat)/|k|^2, zero mode removed.
VectorField leray_project(const VectorField& v);

/// Sharp Fourier cutoff |k|_inf <= K (the Galerkin projector P^n).
ScalarField truncate(const ScalarField& f, int K);
VectorField truncate(const VectorField& v, int K);
SymTensorField truncate(const SymTensorField& T, int K);

/// Relative spectral divergence  max_k |k.vhat| / max_k |k||vhat|;
/// zero for the zero field.
double spectral_divergence_rel(const VectorField& v);

/// Periodic Gaussian mollifier, realized as the spectral multiplier
/// exp(-delta^2 |2 pi k|^2 / 2). delta = 0 returns the input unchanged.
ScalarField mollify(const ScalarField& c, double delta);

/// Spectral upsampling to a finer grid (zero padding); exact for fields
/// resolved on the source grid.
ScalarField refine_to(const ScalarField& f, const GridSpec& fine);
VectorField refine_to(const VectorField& v, const GridSpec& fine);

/// Largest coefficient magnitude in the aliasing shell |k|_inf > n/3,
/// relative to the overall peak magnitude; used for resolution checks.
double spectral_tail_fraction(const Field& f);

namespace detail {
/// Unchecked sharp cutoff on raw coefficients; the solver dealiases
/// pointwise products at n/3 even when grid.K is smaller.
void sharp_cutoff(const GridSpec& grid, std::vector<cplx>& coeffs, int comps, int K);
}  // namespace detail

}  // namespace synovia

#endif
