#ifndef SYNOVIA_STRESS_HPP
#define SYNOVIA_STRESS_HPP

#include "synovia/exponent.hpp"
#include "synovia/sym_tensor.hpp"

namespace synovia {

/// Variable-exponent power-law stress S(c,D) = 2 nu0 (1+|D|^2)^{(p(c)-2)/2} D.
struct StressModel {
    double nu0 = 1.0;
    ExponentFn exponent = ExponentFn::constant(2.0);
};

/// Empirical structural constants of the stress law, estimated by
/// sampling (see verify::estimate_stress_constants).
struct StressConstants {
    double K1 = 0.0;  // lower coercivity bound of dS/dD
    double K2 = 0.0;  // upper bound of |dS/dD| / weight
    double K3 = 0.0;  // upper bound of |dS/dc| / weight
    double K4 = 0.0;  // lower monotonicity bound
};

double viscosity(const StressModel& m, double c, const SymTensor& D);

SymTensor stress(const StressModel& m, double c, const SymTensor& D);

/// Stress evaluated pointwise over fields (c and D on the same grid).
SymTensorField stress(const StressModel& m, const ScalarField& c, const SymTensorField& D);

/// The rank-4 derivative dS/dD at a point, in the closed form
///   T_ijkh = 2 nu0 w [ delta_ik delta_jh + (p-2) (1+|D|^2)^{-1} D_ij D_kh ],
/// w = (1+|D|^2)^{(p-2)/2}. Major-symmetric; entries match plain central
/// finite differences of stress() in each matrix slot.
class StressJacobian {
  public:
    StressJacobian(const StressModel& m, double c, const SymTensor& D);

    double entry(int i, int j, int k, int h) const;

    /// Contraction  T : (B (x) B) = sum_{ijkh} T_ijkh B_ij B_kh.
    double contract(const SymTensor& B) const;

    /// T applied to a symmetric tensor, (T B)_ij = sum_kh T_ijkh B_kh.
    SymTensor apply(const SymTensor& B) const;

    /// Frobenius norm over all dim^4 entries.
    double frobenius() const;

    double weight() const { return w_; }  // (1+|D|^2)^{(p-2)/2}

  private:
    int dim_;
    double w_ = 1.0;         // (1+|D|^2)^{(p-2)/2}
    double scale_ = 0.0;     // 2 nu0 w
    double coupling_ = 0.0;  // (p-2)/(1+|D|^2)
    SymTensor D_;
};

/// dS/dc = nu0 p'(c) (1+|D|^2)^{(p(c)-2)/2} log(1+|D|^2) D.
/// Throws NonDifferentiable where the exponent is clamped.
SymTensor dstress_dc(const StressModel& m, double c, const SymTensor& D);

struct GapSample {
    double lhs = 0.0;
    double weight = 0.0;
    double ratio() const { return weight > 0.0 ? lhs / weight : 0.0; }
};

/// Monotonicity sample: lhs = (S(c,D1)-S(c,D2)):(D1-D2),
/// weight = (1+|D1|^2+|D2|^2)^{(p(c)-2)/2} |D1-D2|^2. The degenerate
/// pair D1 = D2 yields {0, 0}.
GapSample monotonicity_gap(const StressModel& m, double c, const SymTensor& D1,
                           const SymTensor& D2);

/// Coercivity sample: lhs = dS/dD : (B (x) B),
/// weight = (1+|D|^2)^{(p(c)-2)/2} |B|^2. B = 0 yields {0, 0}.
GapSample coercivity_gap(const StressModel& m, double c, const SymTensor& D,
                         const SymTensor& B);

}  // namespace synovia

#endif
