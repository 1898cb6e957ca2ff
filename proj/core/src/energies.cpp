#include "synovia/energies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synovia/errors.hpp"
#include "synovia/norms.hpp"
#include "synovia/spectral.hpp"

namespace synovia {

ScalarField d_bar(const SymTensorField& D) {
    const std::size_t np = D.grid().points();
    ScalarField out(D.grid());
    auto vals = out.mutable_component(0);
    for (std::size_t i = 0; i < np; ++i) {
        double d2 = 0.0;
        for (int c = 0; c < D.comps(); ++c) {
            const double e = D.at(c, i);
            d2 += D.component_multiplicity(c) * e * e;
        }
        vals[i] = std::sqrt(1.0 + d2);
    }
    return out;
}

namespace {

void check_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid() == b.grid())) throw GridMismatch(std::string(what) + ": grid mismatch");
}

// integral (Dbar v)^{p(c)-2} w(x) dx for a pointwise weight series w.
double weighted_integral(const ExponentFn& exponent, const ScalarField& c,
                         const SymTensorField& D, const std::vector<double>& w) {
    const ScalarField dbar = d_bar(D);
    auto db = dbar.component(0);
    auto cv = c.component(0);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        acc += std::pow(db[i], exponent(cv[i]) - 2.0) * w[i];
    return acc * c.grid().cell_volume();
}

}  // namespace

double energy_ip(const ExponentFn& exponent, const ScalarField& c, const VectorField& v) {
    check_same_grid(c, v, "energy_ip");
    const SymTensorField D = sym_gradient(v);
    return weighted_integral(exponent, c, D, derivative_magnitude_sq(D, 1));
}

double energy_jp(const ExponentFn& exponent, const ScalarField& c, const VectorField& v,
                 const VectorField& v_dot) {
    check_same_grid(c, v, "energy_jp");
    check_same_grid(v, v_dot, "energy_jp");
    const SymTensorField D = sym_gradient(v);
    return weighted_integral(exponent, c, D, derivative_magnitude_sq(sym_gradient(v_dot), 0));
}

namespace {

void check_q(double q, int dim) {
    if (dim == 3 && !(q >= 4.0))
        throw InvalidParameter("Grönwall monitor needs q >= 4 in 3D");
    if (dim == 2 && !(q > 2.0))
        throw InvalidParameter("Grönwall monitor needs q > 2 in 2D");
}

double dbar_term(const VectorField& v, int dim) {
    if (dim == 2) {
        const double g2 = sobolev_seminorm(v, 1, 2.0);
        return g2 * g2;
    }
    const double s = 12.0 / 5.0;
    return std::pow(lp_norm(d_bar(sym_gradient(v)), s), s);
}

}  // namespace

double gronwall_zeta(const VectorField& v, const VectorField& v_dot, const ScalarField& c,
                     const ScalarField& c_dot, double q, int dim) {
    check_q(q, dim);
    const double dtv = lp_norm(v_dot, 2.0);
    return dbar_term(v, dim) + dtv * dtv +
           std::pow(sobolev_seminorm(c, 1, q), q) + std::pow(lp_norm(c_dot, q), q);
}

EnergyReport make_energy_report(const ExponentFn& exponent, double t, const VectorField& v,
                                const VectorField& v_dot, const ScalarField& c,
                                const ScalarField& c_dot, double q) {
    const int dim = v.grid().dim;
    check_q(q, dim);
    EnergyReport r;
    r.t = t;
    const double v2 = lp_norm(v, 2.0);
    r.kinetic = 0.5 * v2 * v2;
    r.ip = energy_ip(exponent, c, v);
    r.jp = energy_jp(exponent, c, v, v_dot);
    r.dbar_s = dbar_term(v, dim);
    const double dtv = lp_norm(v_dot, 2.0);
    r.dtv2 = dtv * dtv;
    r.gradc_q = std::pow(sobolev_seminorm(c, 1, q), q);
    r.dtc_q = std::pow(lp_norm(c_dot, q), q);
    r.zeta = r.dbar_s + r.dtv2 + r.gradc_q + r.dtc_q;
    r.modular_gradv = modular(spectral_gradient(v), exponent.evaluate(c));
    r.mass_c = c.mean();
    return r;
}

double gronwall_Phi(const GronwallParams& g, double t) {
    if (t < 0.0) throw InvalidParameter("gronwall_Phi: t must be >= 0");
    if (g.phi_times.size() != g.phi_values.size())
        throw InvalidParameter("gronwall: phi series length mismatch");
    double integral = 0.0;
    const auto& ts = g.phi_times;
    const auto& ph = g.phi_values;
    for (std::size_t i = 0; i + 1 < ts.size() && ts[i] < t; ++i) {
        const double t0 = ts[i];
        const double t1 = std::min(ts[i + 1], t);
        if (t1 <= t0) continue;
        // linear interpolation of phi at t1 if clipped
        const double frac = (ts[i + 1] > ts[i]) ? (t1 - ts[i]) / (ts[i + 1] - ts[i]) : 0.0;
        const double p1 = ph[i] + frac * (ph[i + 1] - ph[i]);
        integral += 0.5 * (ph[i] + p1) * (t1 - t0);
    }
    // constant continuation past the last sample
    if (!ts.empty() && t > ts.back()) integral += ph.back() * (t - ts.back());
    return g.zeta0 + integral;
}

double gronwall_bracket(const GronwallParams& g, double t) {
    const double Phi = gronwall_Phi(g, t);
    return 1.0 - g.alpha * g.c0 * std::pow(Phi, g.alpha) * t;
}

double gronwall_bound(const GronwallParams& g, double t) {
    if (!(g.alpha > 0.0) || !(g.c0 > 0.0))
        throw InvalidParameter("gronwall_bound: alpha and c0 must be positive");
    if (g.zeta0 < 0.0) throw InvalidParameter("gronwall_bound: zeta0 must be >= 0");
    const double Phi = gronwall_Phi(g, t);
    const double bracket = 1.0 - g.alpha * g.c0 * std::pow(Phi, g.alpha) * t;
    if (bracket <= 0.0)
        throw BlowUpBeforeT("Grönwall bracket reached zero before t = " + std::to_string(t));
    return Phi + Phi * (std::pow(bracket, -1.0 / g.alpha) - 1.0);
}

}  // namespace synovia
