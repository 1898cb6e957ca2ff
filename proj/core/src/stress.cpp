#include "synovia/stress.hpp"

#include <cmath>

#include "synovia/errors.hpp"

namespace synovia {

double viscosity(const StressModel& m, double c, const SymTensor& D) {
    const double p = m.exponent(c);
    return m.nu0 * std::pow(1.0 + D.frobenius_sq(), 0.5 * (p - 2.0));
}

SymTensor stress(const StressModel& m, double c, const SymTensor& D) {
    return (2.0 * viscosity(m, c, D)) * D;
}

SymTensorField stress(const StressModel& m, const ScalarField& c, const SymTensorField& D) {
    if (!(c.grid() == D.grid())) throw GridMismatch("stress: c and D on different grids");
    const GridSpec& g = D.grid();
    const std::size_t np = g.points();
    const int nc = sym_components(g.dim);

    SymTensorField out(g);
    auto cv = c.component(0);
    auto& vals = out.mutable_values();
    for (std::size_t i = 0; i < np; ++i) {
        double d2 = 0.0;
        for (int comp = 0; comp < nc; ++comp) {
            const double e = D.at(comp, i);
            d2 += sym_multiplicity(g.dim, comp) * e * e;
        }
        const double p = m.exponent(cv[i]);
        const double f = 2.0 * m.nu0 * std::pow(1.0 + d2, 0.5 * (p - 2.0));
        for (int comp = 0; comp < nc; ++comp)
            vals[static_cast<std::size_t>(comp) * np + i] = f * D.at(comp, i);
    }
    if (!out.is_finite()) throw NonFinite("stress: output contains NaN/Inf");
    return out;
}

StressJacobian::StressJacobian(const StressModel& m, double c, const SymTensor& D)
    : dim_(D.dim), D_(D) {
    const double p = m.exponent(c);
    const double one_d2 = 1.0 + D.frobenius_sq();
    w_ = std::pow(one_d2, 0.5 * (p - 2.0));
    scale_ = 2.0 * m.nu0 * w_;
    coupling_ = (p - 2.0) / one_d2;
}

double StressJacobian::entry(int i, int j, int k, int h) const {
    const double kron = (i == k && j == h) ? 1.0 : 0.0;
    return scale_ * (kron + coupling_ * D_(i, j) * D_(k, h));
}

double StressJacobian::contract(const SymTensor& B) const {
    const double db = D_.dot(B);
    return scale_ * (B.frobenius_sq() + coupling_ * db * db);
}

SymTensor StressJacobian::apply(const SymTensor& B) const {
    const double db = D_.dot(B);
    SymTensor out = B;
    out *= scale_;
    SymTensor dd = D_;
    dd *= scale_ * coupling_ * db;
    out += dd;
    return out;
}

double StressJacobian::frobenius() const {
    // |T|^2 = scale^2 (dim^2 + 2 coupling |D|^2 + coupling^2 |D|^4)
    const double d2 = D_.frobenius_sq();
    const double dd = static_cast<double>(dim_ * dim_);
    return std::abs(scale_) * std::sqrt(dd + 2.0 * coupling_ * d2 + coupling_ * coupling_ * d2 * d2);
}

SymTensor dstress_dc(const StressModel& m, double c, const SymTensor& D) {
    if (!m.exponent.differentiable_at(c))
        throw NonDifferentiable("dstress_dc: exponent clamped at this concentration");
    const double p = m.exponent(c);
    const double dp = m.exponent.derivative(c);
    const double one_d2 = 1.0 + D.frobenius_sq();
    const double f = m.nu0 * dp * std::pow(one_d2, 0.5 * (p - 2.0)) * std::log(one_d2);
    SymTensor out = D;
    out *= f;
    return out;
}

GapSample monotonicity_gap(const StressModel& m, double c, const SymTensor& D1,
                           const SymTensor& D2) {
    SymTensor diff = D1 - D2;
    const double diff2 = diff.frobenius_sq();
    if (diff2 == 0.0) return {0.0, 0.0};
    const double p = m.exponent(c);
    const double lhs = (stress(m, c, D1) - stress(m, c, D2)).dot(diff);
    const double weight =
        std::pow(1.0 + D1.frobenius_sq() + D2.frobenius_sq(), 0.5 * (p - 2.0)) * diff2;
    return {lhs, weight};
}

GapSample coercivity_gap(const StressModel& m, double c, const SymTensor& D,
                         const SymTensor& B) {
    const double b2 = B.frobenius_sq();
    if (b2 == 0.0) return {0.0, 0.0};
    StressJacobian J(m, c, D);
    return {J.contract(B), J.weight() * b2};
}

}  // namespace synovia
