#ifndef SYNOVIA_VERIFY_HPP
#define SYNOVIA_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "synovia/solver.hpp"
#include "synovia/stress.hpp"

namespace synovia {

/// Outcome of one inequality check along a run or snapshot. The
/// empirical constant is reported, never proven: acceptance asserts
/// finiteness and stability, not specific values.
struct InequalityReport {
    std::string name;
    std::vector<double> times;
    std::vector<double> lhs_series;
    std::vector<double> rhs_series;
    double empirical_constant = 0.0;
    double tolerance = 0.0;
    bool satisfied = false;
    std::string note;
};

/// Energy-estimate containment: the running supremum of ||v||_2^2 plus
/// the accumulated modulars of grad v and the dual stress must stay
/// within factor 2 of a budget built from the data norms (||v0||_2^2,
/// accumulated |f.v| and dissipation), with the budget constant fitted
/// on the first half of the run. Throws EmptyRun on fewer than 2 rows.
InequalityReport check_energy_balance(const RunReport& r);

/// Hessian-energy inequality: ||grad^2 v||_{p-}^{p-} against
/// I_p + ||Dbar v||_{p-}^{p-}; satisfied when the ratio is stable
/// (within factor 2) under spectral refinement n -> 2n. Throws
/// UnderResolved when the spectral tail of v exceeds 1e-8 of its peak.
InequalityReport check_lemma_hessian(const ExponentFn& exponent, const ScalarField& c,
                                     const VectorField& v);

/// Weighted-difference inequality for 1 <= l < 2: pointwise Hölder, so
/// the discrete check holds with constant 1 up to quadrature rounding.
InequalityReport check_lemma_difference(const ExponentFn& exponent, const ScalarField& c,
                                        const VectorField& v1, const VectorField& v2, double l);

/// Sampling estimate of the structural constants of the stress law over
/// uniformly drawn (c, D, B) with |D|, |B| <= magnitude_cap.
/// Requires samples >= 10^4.
StressConstants estimate_stress_constants(const StressModel& m, std::size_t samples,
                                          double magnitude_cap, std::uint64_t seed = 0x5eed,
                                          int dim = 3);

/// Fit (c0, alpha) of  zeta' <= phi + c0 zeta^{1+alpha}  along the run
/// (alpha from least squares on the positive log increments, c0 as the
/// discrete envelope constant), then compare zeta(t) against the local
/// Grönwall bound. phi_values, when given, must align with r.rows and
/// hold the forcing-dependent floor; empty means phi = 0. Throws
/// FitFailure when the increments cannot support a fit and EmptyRun on
/// fewer than 10 samples.
InequalityReport check_gronwall_chain(const RunReport& r,
                                      const std::vector<double>& phi_values = {});

}  // namespace synovia

#endif
