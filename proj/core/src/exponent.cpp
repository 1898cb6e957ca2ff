#include "synovia/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synovia/errors.hpp"

namespace synovia {

namespace {

void check_bounds(double p_minus, double p_plus) {
    if (!(p_minus > 1.0) || !(p_plus >= p_minus) || !std::isfinite(p_plus))
        throw InvalidParameter("exponent bounds must satisfy 1 < p_minus <= p_plus < inf");
}

}  // namespace

ExponentFn ExponentFn::constant(double p) {
    check_bounds(p, p);
    ExponentFn e;
    e.shape_ = Shape::Constant;
    e.p_minus_ = e.p_plus_ = p;
    e.lipschitz_ = 0.0;
    return e;
}

ExponentFn ExponentFn::logistic(double p_lo, double p_hi, double c_mid, double slope) {
    check_bounds(p_lo, p_hi);
    if (!(slope > 0.0)) throw InvalidParameter("logistic exponent needs slope > 0");
    ExponentFn e;
    e.shape_ = Shape::Logistic;
    e.p_minus_ = p_lo;
    e.p_plus_ = p_hi;
    e.c_mid_ = c_mid;
    e.slope_ = slope;
    e.lipschitz_ = 0.25 * (p_hi - p_lo) * slope;  // |p'| peaks at c_mid
    return e;
}

ExponentFn ExponentFn::affine(double a, double b, double p_minus, double p_plus) {
    check_bounds(p_minus, p_plus);
    ExponentFn e;
    e.shape_ = Shape::Affine;
    e.p_minus_ = p_minus;
    e.p_plus_ = p_plus;
    e.a_ = a;
    e.b_ = b;
    e.lipschitz_ = std::abs(b);
    return e;
}

double ExponentFn::operator()(double c) const {
    double p = 0.0;
    switch (shape_) {
        case Shape::Constant:
            return p_minus_;
        case Shape::Logistic: {
            // decreasing in c: p -> p_plus as c -> -inf, p_minus as c -> +inf
            const double t = slope_ * (c - c_mid_);
            p = p_minus_ + (p_plus_ - p_minus_) / (1.0 + std::exp(t));
            break;
        }
        case Shape::Affine:
            p = a_ + b_ * c;
            break;
    }
    return std::clamp(p, p_minus_, p_plus_);
}

bool ExponentFn::differentiable_at(double c) const {
    if (shape_ != Shape::Affine) return true;
    const double raw = a_ + b_ * c;
    return raw > p_minus_ && raw < p_plus_;
}

double ExponentFn::derivative(double c) const {
    switch (shape_) {
        case Shape::Constant:
            return 0.0;
        case Shape::Logistic: {
            const double t = slope_ * (c - c_mid_);
            const double e = std::exp(-std::abs(t));
            const double denom = (1.0 + e) * (1.0 + e);
            return -(p_plus_ - p_minus_) * slope_ * e / denom;
        }
        case Shape::Affine:
            if (!differentiable_at(c))
                throw NonDifferentiable("affine exponent clamped at c = " + std::to_string(c));
            return b_;
    }
    return 0.0;
}

ScalarField ExponentFn::evaluate(const ScalarField& c) const {
    ScalarField out(c.grid());
    auto in = c.component(0);
    auto vals = out.mutable_component(0);
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = (*this)(in[i]);
    return out;
}

}  // namespace synovia
