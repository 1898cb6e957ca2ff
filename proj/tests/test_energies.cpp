#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "synovia/energies.hpp"
#include "synovia/errors.hpp"
#include "synovia/norms.hpp"
#include "synovia/spectral.hpp"

using namespace synovia;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

VectorField shear_mode(const GridSpec& g, double amp) {
    return sample_vector(g, [amp](const Point& x) {
        return std::array<double, 3>{amp * std::sin(kTwoPi * x[1]), 0.0, 0.0};
    });
}

VectorField smooth_random_vector(const GridSpec& g, int kmax, std::uint64_t seed) {
    VectorField v(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto& x : v.mutable_values()) x = unit(rng);
    return truncate(v, kmax);
}

}  // namespace

TEST_SUITE("energies") {

TEST_CASE("d_bar floor and closed-form values") {
    const GridSpec g = make_grid(3, 16, 5);
    SymTensorField zero(g);
    ScalarField one = d_bar(zero);
    CHECK(lp_norm(one, kInfNorm) == doctest::Approx(1.0));
    CHECK(one.mean() == doctest::Approx(1.0));

    // |D|^2 = 3 everywhere -> Dbar = 2
    SymTensorField D(g);
    for (int d = 0; d < 3; ++d)
        for (auto& x : D.mutable_component(sym_index(3, d, d))) x = 1.0;
    CHECK(d_bar(D).mean() == doctest::Approx(2.0));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    SymTensorField R(g);
    for (auto& x : R.mutable_values()) x = unit(rng);
    const ScalarField db = d_bar(R);
    double mn = 1e300;
    for (double v : db.values()) mn = std::min(mn, v);
    CHECK(mn >= 1.0);
}

TEST_CASE("energy_ip: zero for constants, plain Hessian energy at p = 2") {
    const GridSpec g = make_grid(3, 32, 10);
    const ScalarField c = sample_scalar(g, [](const Point&) { return 0.3; });
    const VectorField vc = sample_vector(g, [](const Point&) {
        return std::array<double, 3>{1.0, -2.0, 0.5};
    });
    const ExponentFn p2 = ExponentFn::constant(2.0);
    CHECK(energy_ip(p2, c, vc) == doctest::Approx(0.0).scale(1.0));

    // single shear mode at p = 2: integral |grad Dv|^2 = 4 pi^4 (two packed
    // mirror entries D12 = D21 = pi cos(2 pi x2), one derivative each)
    const VectorField v = shear_mode(g, 1.0);
    CHECK(energy_ip(p2, c, v) == doctest::Approx(4.0 * std::pow(kPi, 4)).epsilon(1e-10));

    // shear-thinning weight only reduces the energy ((Dbar)^{p-2} <= 1)
    const ExponentFn thin = ExponentFn::logistic(1.4, 2.0, 0.5, 5.0);
    const VectorField r = smooth_random_vector(g, 5, 9);
    const ScalarField cr = sample_scalar(g, [](const Point& x) { return x[0]; });
    CHECK(energy_ip(thin, cr, r) <= energy_ip(p2, cr, r) * (1.0 + 1e-12));
    CHECK(energy_ip(thin, cr, r) >= 0.0);
}

TEST_CASE("energy_jp: zero rate, p = 2 reduction, exponential decay mode") {
    const GridSpec g = make_grid(3, 32, 10);
    const ScalarField c = sample_scalar(g, [](const Point&) { return 0.3; });
    const ExponentFn p2 = ExponentFn::constant(2.0);
    const VectorField v = shear_mode(g, 1.0);
    const VectorField zero(g);
    CHECK(energy_jp(p2, c, v, zero) == doctest::Approx(0.0).scale(1.0));

    // v(t) = e^{-lambda t} w at t with v_dot = -lambda v:
    // J_p = lambda^2 ||D v||_2^2 at p = 2
    const double lambda = 3.7;
    VectorField v_dot = v;
    for (auto& x : v_dot.mutable_values()) x *= -lambda;
    const double dv2 = lp_norm(sym_gradient(v), 2.0);
    CHECK(energy_jp(p2, c, v, v_dot) ==
          doctest::Approx(lambda * lambda * dv2 * dv2).epsilon(1e-6));

    // weighted version against a directly computed oracle
    const ExponentFn thin = ExponentFn::logistic(1.5, 2.0, 0.5, 4.0);
    const ScalarField cr = sample_scalar(g, [](const Point& x) { return x[1]; });
    const SymTensorField D = sym_gradient(v);
    const ScalarField db = d_bar(D);
    double oracle = 0.0;
    for (std::size_t i = 0; i < g.points(); ++i) {
        double dd2 = 0.0;
        for (int comp = 0; comp < 6; ++comp) {
            const double e = D.at(comp, i);
            dd2 += sym_multiplicity(3, comp) * e * e;
        }
        oracle += std::pow(db.component(0)[i], thin(cr.component(0)[i]) - 2.0) *
                  lambda * lambda * dd2;
    }
    oracle *= g.cell_volume();
    CHECK(energy_jp(thin, cr, v, v_dot) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("gronwall_zeta closed forms and recomputation consistency") {
    // 3D zero state with constant c: only the Dbar term survives and
    // integrates to 1
    const GridSpec g3 = make_grid(3, 16, 5);
    const VectorField z3(g3);
    const ScalarField c3 = sample_scalar(g3, [](const Point&) { return 1.0; });
    const ScalarField zc3(g3);
    CHECK(gronwall_zeta(z3, z3, c3, zc3, 4.0, 3) == doctest::Approx(1.0).epsilon(1e-12));

    // 2D zero state: the gradient term replaces Dbar and everything is 0
    const GridSpec g2 = make_grid(2, 16, 5);
    const VectorField z2(g2);
    const ScalarField c2 = sample_scalar(g2, [](const Point&) { return 1.0; });
    const ScalarField zc2(g2);
    CHECK(gronwall_zeta(z2, z2, c2, zc2, 3.0, 2) == doctest::Approx(0.0).scale(1.0));

    CHECK_THROWS_AS(gronwall_zeta(z3, z3, c3, zc3, 3.0, 3), InvalidParameter);
    CHECK_THROWS_AS(gronwall_zeta(z2, z2, c2, zc2, 2.0, 2), InvalidParameter);

    // generic state: the report's zeta equals the raw-field recomputation
    const VectorField v = smooth_random_vector(g3, 4, 21);
    VectorField vd = smooth_random_vector(g3, 4, 22);
    const ScalarField c =
        sample_scalar(g3, [](const Point& x) { return 1.0 + 0.3 * std::sin(kTwoPi * x[0]); });
    const ScalarField cd =
        sample_scalar(g3, [](const Point& x) { return 0.1 * std::cos(kTwoPi * x[2]); });
    const ExponentFn thin = ExponentFn::logistic(1.5, 2.0, 0.5, 4.0);
    const EnergyReport row = make_energy_report(thin, 0.7, v, vd, c, cd, 4.0);
    CHECK(row.zeta == doctest::Approx(gronwall_zeta(v, vd, c, cd, 4.0, 3)).epsilon(1e-12));
    CHECK(row.zeta ==
          doctest::Approx(row.dbar_s + row.dtv2 + row.gradc_q + row.dtc_q).epsilon(1e-15));
    CHECK(row.mass_c == doctest::Approx(c.mean()));
    CHECK(row.kinetic >= 0.0);
    CHECK(row.ip >= 0.0);
    CHECK(row.jp >= 0.0);
}

TEST_CASE("gronwall_bound: stated formula, blow-up bracket, monotonicity") {
    GronwallParams g;
    g.zeta0 = 1.0;
    g.alpha = 1.0;
    g.c0 = 1.0;

    CHECK(gronwall_bound(g, 0.0) == doctest::Approx(1.0));
    // phi = 0: bound(t) = (1 - t)^{-1}; at t = 0.5 that is 2
    CHECK(gronwall_bound(g, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(gronwall_bound(g, 1.0), BlowUpBeforeT);
    CHECK_THROWS_AS(gronwall_bound(g, 2.0), BlowUpBeforeT);

    double prev = 0.0;
    for (double t = 0.0; t < 0.95; t += 0.05) {
        const double b = gronwall_bound(g, t);
        CHECK(b >= prev);
        prev = b;
    }

    // nonzero phi enters through the trapezoidal Phi
    GronwallParams gf = g;
    gf.phi_times = {0.0, 1.0};
    gf.phi_values = {2.0, 2.0};
    CHECK(gronwall_Phi(gf, 0.25) == doctest::Approx(1.5));
    CHECK(gronwall_bound(gf, 0.25) > gronwall_bound(g, 0.25));

    GronwallParams bad = g;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(gronwall_bound(bad, 0.1), InvalidParameter);
}

TEST_CASE("gronwall_bound dominates the integrated comparison ODE") {
    // zeta' = c0 zeta^{1+alpha} integrated by RK4 as the independent oracle
    GronwallParams g;
    g.zeta0 = 0.8;
    g.alpha = 1.5;
    g.c0 = 0.7;
    double z = g.zeta0;
    const double dt = 1e-5;
    auto f = [&](double y) { return g.c0 * std::pow(y, 1.0 + g.alpha); };
    for (double t = 0.0; t < 0.4; t += dt) {
        const double k1 = f(z);
        const double k2 = f(z + 0.5 * dt * k1);
        const double k3 = f(z + 0.5 * dt * k2);
        const double k4 = f(z + dt * k3);
        z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // phi = 0 case: the bound is the exact blow-up solution
    const double analytic =
        g.zeta0 * std::pow(1.0 - g.alpha * g.c0 * std::pow(g.zeta0, g.alpha) * 0.4,
                           -1.0 / g.alpha);
    CHECK(z == doctest::Approx(analytic).epsilon(1e-6));
    CHECK(z <= gronwall_bound(g, 0.4) * (1.0 + 1e-6));
}

}  // TEST_SUITE
