#ifndef SYNOVIA_ENERGIES_HPP
#define SYNOVIA_ENERGIES_HPP

#include <vector>

#include "synovia/exponent.hpp"
#include "synovia/field.hpp"

namespace synovia {

/// One monitored sample of the diagnostic functionals along a run.
/// zeta is always the exact sum dbar_s + dtv2 + gradc_q + dtc_q.
struct EnergyReport {
    double t = 0.0;
    double kinetic = 0.0;        // 0.5 ||v||_2^2
    double ip = 0.0;             // integral (Dbar v)^{p(c)-2} |grad Dv|^2
    double jp = 0.0;             // integral (Dbar v)^{p(c)-2} |dt Dv|^2
    double dbar_s = 0.0;         // ||Dbar v||_{12/5}^{12/5} (2D: ||grad v||_2^2)
    double dtv2 = 0.0;           // ||dt v||_2^2
    double gradc_q = 0.0;        // ||grad c||_q^q
    double dtc_q = 0.0;          // ||dt c||_q^q
    double zeta = 0.0;
    double modular_gradv = 0.0;  // integral |grad v|^{p(c)}
    double mass_c = 0.0;         // integral c
};

/// Shifted strain magnitude (1 + |D|^2)^{1/2} >= 1, pointwise.
ScalarField d_bar(const SymTensorField& D);

/// Weighted Hessian energy  integral (Dbar v)^{p(c)-2} |grad Dv|^2 dx.
double energy_ip(const ExponentFn& exponent, const ScalarField& c, const VectorField& v);

/// Weighted rate energy  integral (Dbar v)^{p(c)-2} |D v_dot|^2 dx.
double energy_jp(const ExponentFn& exponent, const ScalarField& c, const VectorField& v,
                 const VectorField& v_dot);

/// The four-term Grönwall quantity recomputed from raw fields. q must
/// satisfy q >= 4 when dim = 3 and q > 2 when dim = 2.
double gronwall_zeta(const VectorField& v, const VectorField& v_dot, const ScalarField& c,
                     const ScalarField& c_dot, double q, int dim);

/// Full monitor row from a state snapshot and its discrete rates.
EnergyReport make_energy_report(const ExponentFn& exponent, double t, const VectorField& v,
                                const VectorField& v_dot, const ScalarField& c,
                                const ScalarField& c_dot, double q);

/// Data of the local Grönwall comparison  zeta' <= phi + c0 zeta^{1+alpha}.
/// phi is a sampled nonnegative function of time (piecewise linear);
/// an empty series means phi = 0.
struct GronwallParams {
    double zeta0 = 0.0;
    double alpha = 1.0;
    double c0 = 1.0;
    std::vector<double> phi_times;
    std::vector<double> phi_values;
};

/// Phi(t) = zeta(0) + integral_0^t phi (trapezoidal on the stored series).
double gronwall_Phi(const GronwallParams& g, double t);

/// The bracket 1 - alpha c0 Phi(t)^alpha t; the guaranteed-existence
/// horizon ends where it reaches zero.
double gronwall_bracket(const GronwallParams& g, double t);

/// Bound  Phi + Phi ((1 - alpha c0 Phi^alpha t)^{-1/alpha} - 1).
/// Throws BlowUpBeforeT once the bracket is <= 0.
double gronwall_bound(const GronwallParams& g, double t);

}  // namespace synovia

#endif
