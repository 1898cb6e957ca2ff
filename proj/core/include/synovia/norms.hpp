#ifndef SYNOVIA_NORMS_HPP
#define SYNOVIA_NORMS_HPP

#include <limits>

#include "synovia/field.hpp"

namespace synovia {

constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Pointwise magnitude written into a scalar field: |f| for scalars,
/// Euclidean norm for vectors, Frobenius norm for tensors (packed
/// symmetric components counted with multiplicity 2).
ScalarField pointwise_magnitude(const Field& f);

/// (integral |f|^r dx)^{1/r} with uniform weights h^dim; r = kInfNorm
/// returns max |f|. Requires r >= 1.
double lp_norm(const Field& f, double r);

/// Variable-exponent modular  integral |f(x)|^{p(x)} dx.
double modular(const Field& f, const ScalarField& p_field);

/// L^r norm of the order-k spectral derivative tensor of f (k = 0,1,2),
/// Frobenius pointwise magnitude over all derivative indices.
double sobolev_seminorm(const Field& f, int k, double r);

/// Pointwise |D^order f|^2 over the grid (order 0, 1 or 2), all
/// derivative indices and components accumulated with multiplicity.
std::vector<double> derivative_magnitude_sq(const Field& f, int order);

/// Parseval sum over the half spectrum: equals lp_norm(f,2)^2 for real
/// fields (conjugate pairs counted by their stored multiplicity).
double spectral_energy(const Field& f);

}  // namespace synovia

#endif
