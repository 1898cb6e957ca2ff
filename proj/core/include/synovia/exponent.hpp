#ifndef SYNOVIA_EXPONENT_HPP
#define SYNOVIA_EXPONENT_HPP

#include "synovia/field.hpp"

namespace synovia {

/// Lipschitz map c -> p(c) with hard bounds 1 < p_minus <= p_plus.
///
/// Evaluation always clamps into [p_minus, p_plus]: transported
/// concentrations can under/overshoot their analytic range, and the
/// structural stress inequalities assume the exponent stays in range.
class ExponentFn {
  public:
    enum class Shape { Constant, Logistic, Affine };

    /// p(c) = p for all c.
    static ExponentFn constant(double p);

    /// Decreasing logistic from p_hi (c -> -inf) to p_lo (c -> +inf),
    /// centered at c_mid with steepness `slope` > 0.
    static ExponentFn logistic(double p_lo, double p_hi, double c_mid, double slope);

    /// p(c) = a + b c, clamped into [p_minus, p_plus].
    static ExponentFn affine(double a, double b, double p_minus, double p_plus);

    double p_minus() const { return p_minus_; }
    double p_plus() const { return p_plus_; }
    double lipschitz_bound() const { return lipschitz_; }
    Shape shape() const { return shape_; }

    double operator()(double c) const;

    /// dp/dc; throws NonDifferentiable where an affine exponent is clamped.
    double derivative(double c) const;

    /// True if p'(c) exists at c (affine shapes lose differentiability at
    /// the clamp boundary).
    bool differentiable_at(double c) const;

    ScalarField evaluate(const ScalarField& c) const;

  private:
    ExponentFn() = default;
    Shape shape_ = Shape::Constant;
    double p_minus_ = 2.0;
    double p_plus_ = 2.0;
    double lipschitz_ = 0.0;
    // logistic parameters
    double c_mid_ = 0.0;
    double slope_ = 0.0;
    // affine parameters
    double a_ = 0.0;
    double b_ = 0.0;
};

}  // namespace synovia

#endif
