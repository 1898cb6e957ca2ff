#include "synovia/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "synovia/errors.hpp"
#include "synovia/fft.hpp"
#include "synovia/norms.hpp"
#include "synovia/spectral.hpp"

namespace synovia {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ForcingSpec ForcingSpec::single_mode(std::array<int, 3> k, double amplitude, int component) {
    ForcingSpec f;
    f.kind = Kind::SingleMode;
    f.mode = k;
    f.amplitude = amplitude;
    f.component = component;
    return f;
}

ForcingSpec ForcingSpec::time_ramp(std::array<int, 3> k, double base, double rate, int component) {
    ForcingSpec f;
    f.kind = Kind::TimeRamp;
    f.mode = k;
    f.amplitude = base;
    f.ramp_rate = rate;
    f.component = component;
    return f;
}

ForcingSpec ForcingSpec::custom(std::vector<double> times, std::vector<VectorField> fields) {
    ForcingSpec f;
    f.kind = Kind::Custom;
    f.sample_times = std::move(times);
    f.sample_fields = std::move(fields);
    return f;
}

void validate_forcing(const ForcingSpec& f, const GridSpec& grid, double t_end) {
    switch (f.kind) {
        case ForcingSpec::Kind::Zero:
            return;
        case ForcingSpec::Kind::SingleMode:
        case ForcingSpec::Kind::TimeRamp: {
            const int kmax = std::max({std::abs(f.mode[0]), std::abs(f.mode[1]), std::abs(f.mode[2])});
            if (kmax > grid.K)
                throw InvalidParameter("forcing mode must be resolved: |k|_inf <= K");
            if (grid.dim == 2 && f.mode[2] != 0)
                throw InvalidParameter("forcing mode has a third component on a 2D grid");
            if (f.component < 0 || f.component >= grid.dim)
                throw InvalidParameter("forcing component out of range");
            if (!std::isfinite(f.amplitude) || !std::isfinite(f.ramp_rate))
                throw InvalidParameter("forcing amplitude must be finite");
            return;
        }
        case ForcingSpec::Kind::Custom: {
            if (f.sample_times.size() != f.sample_fields.size() || f.sample_times.empty())
                throw InvalidParameter("custom forcing needs matching, nonempty time/field series");
            if (f.sample_times.front() > 0.0 || f.sample_times.back() < t_end)
                throw InvalidParameter("custom forcing series must cover [0, t_end]");
            for (std::size_t i = 0; i < f.sample_times.size(); ++i) {
                if (i > 0 && f.sample_times[i] <= f.sample_times[i - 1])
                    throw InvalidParameter("custom forcing times must increase");
                if (!(f.sample_fields[i].grid() == grid))
                    throw GridMismatch("custom forcing field on wrong grid");
                if (!f.sample_fields[i].is_finite())
                    throw InvalidParameter("custom forcing field is not finite");
            }
            return;
        }
    }
}

namespace {

double ramp_amplitude(const ForcingSpec& f, double t) {
    return f.kind == ForcingSpec::Kind::TimeRamp ? f.amplitude + f.ramp_rate * t : f.amplitude;
}

VectorField mode_field(const ForcingSpec& f, const GridSpec& grid, double amp) {
    const std::array<int, 3> k = f.mode;
    const int comp = f.component;
    return sample_vector(grid, [&](const Point& x) {
        std::array<double, 3> v{0.0, 0.0, 0.0};
        const double phase = kTwoPi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
        v[static_cast<std::size_t>(comp)] = amp * std::cos(phase);
        return v;
    });
}

}  // namespace

VectorField forcing_at(const ForcingSpec& f, const GridSpec& grid, double t) {
    switch (f.kind) {
        case ForcingSpec::Kind::Zero:
            return VectorField(grid);
        case ForcingSpec::Kind::SingleMode:
            return mode_field(f, grid, f.amplitude);
        case ForcingSpec::Kind::TimeRamp:
            return mode_field(f, grid, ramp_amplitude(f, t));
        case ForcingSpec::Kind::Custom: {
            const auto& ts = f.sample_times;
            if (t <= ts.front()) return f.sample_fields.front();
            if (t >= ts.back()) return f.sample_fields.back();
            std::size_t i = 0;
            while (i + 1 < ts.size() && ts[i + 1] < t) ++i;
            const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
            VectorField out = f.sample_fields[i];
            auto& vals = out.mutable_values();
            const auto& hi = f.sample_fields[i + 1].values();
            for (std::size_t j = 0; j < vals.size(); ++j)
                vals[j] = (1.0 - w) * vals[j] + w * hi[j];
            return out;
        }
    }
    return VectorField(grid);
}

double forcing_norm2_sq(const ForcingSpec& f, const GridSpec& grid, double t) {
    if (f.kind == ForcingSpec::Kind::Zero) return 0.0;
    if (f.kind == ForcingSpec::Kind::SingleMode || f.kind == ForcingSpec::Kind::TimeRamp) {
        // ||a cos(2 pi k.x)||_2^2 = a^2/2 for k != 0, a^2 for k = 0
        const double a = ramp_amplitude(f, t);
        const bool zero_mode = f.mode[0] == 0 && f.mode[1] == 0 && f.mode[2] == 0;
        return zero_mode ? a * a : 0.5 * a * a;
    }
    const double n2 = lp_norm(forcing_at(f, grid, t), 2.0);
    return n2 * n2;
}

double forcing_dt_norm2_sq(const ForcingSpec& f, const GridSpec& grid, double t) {
    switch (f.kind) {
        case ForcingSpec::Kind::Zero:
        case ForcingSpec::Kind::SingleMode:
            return 0.0;
        case ForcingSpec::Kind::TimeRamp: {
            const bool zero_mode = f.mode[0] == 0 && f.mode[1] == 0 && f.mode[2] == 0;
            const double r2 = f.ramp_rate * f.ramp_rate;
            return zero_mode ? r2 : 0.5 * r2;
        }
        case ForcingSpec::Kind::Custom: {
            // finite-difference rate between bracketing samples
            const auto& ts = f.sample_times;
            if (ts.size() < 2) return 0.0;
            std::size_t i = 0;
            while (i + 2 < ts.size() && ts[i + 1] < t) ++i;
            VectorField diff = f.sample_fields[i + 1];
            auto& vals = diff.mutable_values();
            const auto& lo = f.sample_fields[i].values();
            const double dt = ts[i + 1] - ts[i];
            for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = (vals[j] - lo[j]) / dt;
            const double n2 = lp_norm(diff, 2.0);
            return n2 * n2;
        }
    }
    return 0.0;
}

std::string validate_config(const SolverConfig& cfg) {
    make_grid(cfg.grid.dim, cfg.grid.n, cfg.grid.K);  // revalidate bounds
    if (!(cfg.dt > 0.0)) throw InvalidParameter("dt must be positive");
    if (!(cfg.t_end > 0.0)) throw InvalidParameter("t_end must be positive");
    if (cfg.delta < 0.0) throw InvalidParameter("delta must be >= 0");
    if (!(cfg.stress.nu0 > 0.0)) throw InvalidParameter("nu0 must be positive");
    if (!(cfg.blowup_threshold > 0.0)) throw InvalidParameter("blowup_threshold must be positive");
    if (cfg.grid.dim == 3 && !(cfg.q >= 4.0))
        throw InvalidParameter("3D runs need q >= 4");
    if (cfg.grid.dim == 2 && !(cfg.q > 2.0))
        throw InvalidParameter("2D runs need q > 2");
    validate_forcing(cfg.forcing, cfg.grid, cfg.t_end);

    const double pm = cfg.stress.exponent.p_minus();
    const double pp = cfg.stress.exponent.p_plus();
    if (!cfg.analysis_mode) {
        if (pp > 2.0)
            throw InvalidParameter("solver mode requires the shear-thinning regime p <= 2");
        if (cfg.grid.dim == 3 && pm <= 7.0 / 5.0)
            return "warning: p_minus = " + std::to_string(pm) +
                   " is outside the 3D strong-solution regime (needs p_minus > 7/5); "
                   "the run is permitted but the local theory gives no guarantee";
    }
    return {};
}

namespace {

void apply_heat_multiplier(const GridSpec& g, std::vector<cplx>& coeffs, int comps, double coef) {
    const std::size_t ns = g.spectral_points();
    int k[3];
    for (std::size_t idx = 0; idx < ns; ++idx) {
        spectral_wavevector(g, idx, k);
        const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
                          static_cast<double>(k[2]) * k[2];
        const double m = std::exp(-coef * kTwoPi * kTwoPi * k2);
        for (int c = 0; c < comps; ++c) coeffs[static_cast<std::size_t>(c) * ns + idx] *= m;
    }
}

void leray_in_place(const GridSpec& g, std::vector<cplx>& coeffs) {
    const std::size_t ns = g.spectral_points();
    int k[3];
    for (std::size_t idx = 0; idx < ns; ++idx) {
        spectral_wavevector(g, idx, k);
        const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
                          static_cast<double>(k[2]) * k[2];
        if (k2 == 0.0) {
            for (int d = 0; d < g.dim; ++d) coeffs[static_cast<std::size_t>(d) * ns + idx] = 0.0;
            continue;
        }
        cplx kdotv{0.0, 0.0};
        for (int d = 0; d < g.dim; ++d)
            kdotv += static_cast<double>(k[d]) * coeffs[static_cast<std::size_t>(d) * ns + idx];
        for (int d = 0; d < g.dim; ++d)
            coeffs[static_cast<std::size_t>(d) * ns + idx] -=
                static_cast<double>(k[d]) * kdotv / k2;
    }
}

inline int deriv_k(const GridSpec& g, int k) { return k == g.n / 2 ? 0 : k; }

// Momentum right-hand side -(v.grad)v + div S + f in spectral space,
// products dealiased at n/3, no projection. split_newtonian replaces S
// by the remainder S - 2 nu0 D.
std::vector<cplx> momentum_rhs(const VectorField& v, const ScalarField& c, const StressModel& m,
                               const ForcingSpec& forcing, const GridSpec& g, double t,
                               bool split_newtonian) {
    const std::size_t ns = g.spectral_points();
    const std::size_t np = g.points();
    const int dim = g.dim;

    // convection (v.grad)v in physical space
    std::vector<double> conv(static_cast<std::size_t>(dim) * np, 0.0);
    std::vector<cplx> dcoeff(ns);
    std::vector<double> dphys(np);
    int k[3];
    for (int i = 0; i < dim; ++i) {
        auto vi_hat = v.spectral_component(i);
        for (int j = 0; j < dim; ++j) {
            for (std::size_t idx = 0; idx < ns; ++idx) {
                spectral_wavevector(g, idx, k);
                dcoeff[idx] = cplx{0.0, kTwoPi * deriv_k(g, k[j])} * vi_hat[idx];
            }
            fft_inverse(g, dcoeff, dphys);
            auto vj = v.component(j);
            double* out = conv.data() + static_cast<std::size_t>(i) * np;
            for (std::size_t x = 0; x < np; ++x) out[x] += vj[x] * dphys[x];
        }
    }

    // stress (or its non-Newtonian remainder)
    SymTensorField D = sym_gradient(v);
    SymTensorField S = stress(m, c, D);
    if (split_newtonian) {
        auto& sv = S.mutable_values();
        const auto& dv = D.values();
        const double two_nu0 = 2.0 * m.nu0;
        for (std::size_t x = 0; x < sv.size(); ++x) sv[x] -= two_nu0 * dv[x];
    }

    std::vector<cplx> rhs(static_cast<std::size_t>(dim) * ns, cplx{0.0, 0.0});
    std::vector<cplx> tmp(ns);

    // -(conv)_i
    for (int i = 0; i < dim; ++i) {
        fft_forward(g, {conv.data() + static_cast<std::size_t>(i) * np, np}, tmp);
        for (std::size_t idx = 0; idx < ns; ++idx)
            rhs[static_cast<std::size_t>(i) * ns + idx] = -tmp[idx];
    }

    // + (div S)_i = sum_j ik_j S_ij
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            auto s_hat = S.spectral_component(sym_index(dim, i, j));
            for (std::size_t idx = 0; idx < ns; ++idx) {
                spectral_wavevector(g, idx, k);
                rhs[static_cast<std::size_t>(i) * ns + idx] +=
                    cplx{0.0, kTwoPi * deriv_k(g, k[j])} * s_hat[idx];
            }
        }
    }

    // + f
    if (forcing.kind != ForcingSpec::Kind::Zero) {
        VectorField f = forcing_at(forcing, g, t);
        const auto& f_hat = f.spectral();
        for (std::size_t x = 0; x < rhs.size(); ++x) rhs[x] += f_hat[x];
    }

    detail::sharp_cutoff(g, rhs, dim, g.n / 3);
    return rhs;
}

// -div(c v) in spectral space, dealiased at n/3 (conservative form: the
// zero mode vanishes identically, so integral c is conserved exactly).
std::vector<cplx> concentration_rhs(const ScalarField& c, const VectorField& v,
                                    const GridSpec& g) {
    const std::size_t ns = g.spectral_points();
    const std::size_t np = g.points();
    std::vector<cplx> rhs(ns, cplx{0.0, 0.0});
    std::vector<double> prod(np);
    std::vector<cplx> tmp(ns);
    auto cv = c.component(0);
    int k[3];
    for (int j = 0; j < g.dim; ++j) {
        auto vj = v.component(j);
        for (std::size_t x = 0; x < np; ++x) prod[x] = cv[x] * vj[x];
        fft_forward(g, prod, tmp);
        for (std::size_t idx = 0; idx < ns; ++idx) {
            spectral_wavevector(g, idx, k);
            rhs[idx] -= cplx{0.0, kTwoPi * deriv_k(g, k[j])} * tmp[idx];
        }
    }
    detail::sharp_cutoff(g, rhs, 1, g.n / 3);
    return rhs;
}

void check_finite_state(const VectorField& v, const ScalarField& c, double t) {
    if (!v.is_finite() || !c.is_finite())
        throw BlowUpDetected("state turned non-finite at t = " + std::to_string(t), t);
}

}  // namespace

VectorField velocity_tendency(const State& s, const SolverConfig& cfg, double t,
                              bool split_newtonian) {
    const GridSpec& g = cfg.grid;
    check_finite_state(s.v, s.c, t);
    auto rhs = momentum_rhs(s.v, s.c, cfg.stress, cfg.forcing, g, t, split_newtonian);
    leray_in_place(g, rhs);
    detail::sharp_cutoff(g, rhs, g.dim, g.K);
    VectorField out(g);
    out.assign_spectral(std::move(rhs));
    if (!out.is_finite()) throw BlowUpDetected("tendency turned non-finite", t);
    return out;
}

State init_state(const VectorField& v0, const ScalarField& c0, const SolverConfig& cfg) {
    validate_config(cfg);
    if (!(v0.grid() == cfg.grid) || !(c0.grid() == cfg.grid))
        throw GridMismatch("init_state: initial data on a different grid");
    if (!v0.is_finite() || !c0.is_finite())
        throw InvalidParameter("init_state: initial data contains NaN/Inf");

    State s;
    s.v = truncate(leray_project(v0), cfg.grid.K);
    s.c = mollify(c0, cfg.delta);
    s.t = 0.0;

    // dt v(0) from the projected equation: P [ div S(c0, Dv0) - (v0.grad)v0 + f(0) ]
    s.v_dot = velocity_tendency(s, cfg, 0.0, /*split_newtonian=*/false);

    // dt c(0) = -v0 . grad c0 + Lap c0, pointwise from the equation
    {
        const GridSpec& g = cfg.grid;
        const std::size_t ns = g.spectral_points();
        const std::size_t np = g.points();
        VectorField grad_c = spectral_gradient(s.c);
        std::vector<double> conv(np, 0.0);
        for (int j = 0; j < g.dim; ++j) {
            auto vj = s.v.component(j);
            auto gj = grad_c.component(j);
            for (std::size_t x = 0; x < np; ++x) conv[x] += vj[x] * gj[x];
        }
        std::vector<cplx> rhs(ns);
        fft_forward(g, conv, rhs);
        detail::sharp_cutoff(g, rhs, 1, g.n / 3);
        auto c_hat = s.c.spectral_component(0);
        int k[3];
        for (std::size_t idx = 0; idx < ns; ++idx) {
            spectral_wavevector(g, idx, k);
            const double k2 = static_cast<double>(k[0]) * k[0] +
                              static_cast<double>(k[1]) * k[1] +
                              static_cast<double>(k[2]) * k[2];
            rhs[idx] = -rhs[idx] - kTwoPi * kTwoPi * k2 * c_hat[idx];
        }
        s.c_dot = ScalarField(g);
        s.c_dot.assign_spectral(std::move(rhs));
    }

    s.c_mass0 = s.c.mean();
    auto cvals = c0.component(0);
    s.c_min0 = *std::min_element(cvals.begin(), cvals.end());
    s.c_max0 = *std::max_element(cvals.begin(), cvals.end());
    s.max_principle_slack = 0.0;
    return s;
}

namespace {

// One IMEX step of the fixed size dt_step (already CFL-limited).
void step_with_dt(State& s, const SolverConfig& cfg, double dt_step) {
    const GridSpec& g = cfg.grid;
    const int dim = g.dim;
    const double nu0 = cfg.stress.nu0;

    // accumulate the advective allowance of the soft maximum principle
    {
        const double vinf = lp_norm(s.v, kInfNorm);
        const double gradc_inf = sobolev_seminorm(s.c, 1, kInfNorm);
        s.max_principle_slack += 10.0 * dt_step * vinf * gradc_inf;
    }

    auto ev1 = momentum_rhs(s.v, s.c, cfg.stress, cfg.forcing, g, s.t, /*split=*/true);
    leray_in_place(g, ev1);
    detail::sharp_cutoff(g, ev1, dim, g.K);
    auto ec1 = concentration_rhs(s.c, s.v, g);

    const auto& v_hat = s.v.spectral();
    const auto& c_hat = s.c.spectral();
    const std::size_t nsv = v_hat.size();
    const std::size_t nsc = c_hat.size();

    std::vector<cplx> v_new(nsv), c_new(nsc);

    if (cfg.scheme == Scheme::ImexEuler) {
        for (std::size_t i = 0; i < nsv; ++i) v_new[i] = v_hat[i] + dt_step * ev1[i];
        for (std::size_t i = 0; i < nsc; ++i) c_new[i] = c_hat[i] + dt_step * ec1[i];
        apply_heat_multiplier(g, v_new, dim, nu0 * dt_step);
        apply_heat_multiplier(g, c_new, 1, dt_step);
    } else {
        // Lawson (integrating-factor) Heun: exact for the pure heat part
        std::vector<cplx> v_star(nsv), c_star(nsc);
        for (std::size_t i = 0; i < nsv; ++i) v_star[i] = v_hat[i] + dt_step * ev1[i];
        for (std::size_t i = 0; i < nsc; ++i) c_star[i] = c_hat[i] + dt_step * ec1[i];
        apply_heat_multiplier(g, v_star, dim, nu0 * dt_step);
        apply_heat_multiplier(g, c_star, 1, dt_step);

        VectorField vs(g);
        vs.assign_spectral(v_star);
        ScalarField cs(g);
        cs.assign_spectral(c_star);
        check_finite_state(vs, cs, s.t + dt_step);

        auto ev2 = momentum_rhs(vs, cs, cfg.stress, cfg.forcing, g, s.t + dt_step, /*split=*/true);
        leray_in_place(g, ev2);
        detail::sharp_cutoff(g, ev2, dim, g.K);
        auto ec2 = concentration_rhs(cs, vs, g);

        for (std::size_t i = 0; i < nsv; ++i) v_new[i] = v_hat[i] + 0.5 * dt_step * ev1[i];
        for (std::size_t i = 0; i < nsc; ++i) c_new[i] = c_hat[i] + 0.5 * dt_step * ec1[i];
        apply_heat_multiplier(g, v_new, dim, nu0 * dt_step);
        apply_heat_multiplier(g, c_new, 1, dt_step);
        for (std::size_t i = 0; i < nsv; ++i) v_new[i] += 0.5 * dt_step * ev2[i];
        for (std::size_t i = 0; i < nsc; ++i) c_new[i] += 0.5 * dt_step * ec2[i];
    }

    VectorField vn(g);
    vn.assign_spectral(std::move(v_new));
    ScalarField cn(g);
    cn.assign_spectral(std::move(c_new));
    check_finite_state(vn, cn, s.t + dt_step);

    // backward-difference rates for the monitors
    {
        VectorField vd(g);
        auto& out = vd.mutable_values();
        const auto& a = vn.values();
        const auto& b = s.v.values();
        for (std::size_t x = 0; x < out.size(); ++x) out[x] = (a[x] - b[x]) / dt_step;
        s.v_dot = std::move(vd);

        ScalarField cd(g);
        auto& outc = cd.mutable_values();
        const auto& ac = cn.values();
        const auto& bc = s.c.values();
        for (std::size_t x = 0; x < outc.size(); ++x) outc[x] = (ac[x] - bc[x]) / dt_step;
        s.c_dot = std::move(cd);
    }

    s.v = std::move(vn);
    s.c = std::move(cn);
    s.t += dt_step;
}

double cfl_dt(const State& s, const SolverConfig& cfg) {
    double dt = cfg.dt;
    const double vinf = lp_norm(s.v, kInfNorm);
    if (vinf > 0.0) dt = std::min(dt, 0.25 * cfg.grid.h() / vinf);
    return dt;
}

void check_blowup(const State& s, const SolverConfig& cfg) {
    check_finite_state(s.v, s.c, s.t);
    const double vinf = lp_norm(s.v, kInfNorm);
    if (vinf > cfg.blowup_threshold)
        throw BlowUpDetected("||v||_inf = " + std::to_string(vinf) +
                                 " crossed the blow-up threshold at t = " + std::to_string(s.t),
                             s.t);
}

}  // namespace

void step(State& s, const SolverConfig& cfg) {
    check_blowup(s, cfg);
    double dt = cfl_dt(s, cfg);
    dt = std::min(dt, cfg.t_end - s.t);
    if (!(dt > 0.0)) throw InvalidParameter("step: no time left before t_end");
    step_with_dt(s, cfg, dt);
}

PressureField recover_pressure(const State& s, const SolverConfig& cfg, double t) {
    const GridSpec& g = cfg.grid;
    check_finite_state(s.v, s.c, t);
    // rhs = -(v.grad)v + div S + f; pressure removes its gradient part:
    // pi_hat = -i (k . rhs_hat) / (2 pi |k|^2)
    auto rhs = momentum_rhs(s.v, s.c, cfg.stress, cfg.forcing, g, t, /*split=*/false);
    const std::size_t ns = g.spectral_points();
    std::vector<cplx> pi_hat(ns, cplx{0.0, 0.0});
    int k[3];
    for (std::size_t idx = 0; idx < ns; ++idx) {
        spectral_wavevector(g, idx, k);
        const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
                          static_cast<double>(k[2]) * k[2];
        if (k2 == 0.0) continue;
        cplx kdotr{0.0, 0.0};
        for (int d = 0; d < g.dim; ++d)
            kdotr += static_cast<double>(k[d]) * rhs[static_cast<std::size_t>(d) * ns + idx];
        pi_hat[idx] = cplx{0.0, -1.0} * kdotr / (kTwoPi * k2);
    }
    PressureField p;
    p.pi = ScalarField(g);
    p.pi.assign_spectral(std::move(pi_hat));
    return p;
}

namespace {

struct MonitorAccumulator {
    double max_div_rel = 0.0;
    double mass_drift_rel = 0.0;
    bool max_principle_violated = false;

    void observe(const State& s, const SolverConfig& cfg) {
        max_div_rel = std::max(max_div_rel, spectral_divergence_rel(s.v));
        const double denom = std::max(std::abs(s.c_mass0), 1e-300);
        mass_drift_rel = std::max(mass_drift_rel, std::abs(s.c.mean() - s.c_mass0) / denom);

        const double range = s.c_max0 - s.c_min0;
        const double allowance = s.max_principle_slack + 0.01 * range + 1e-9;
        auto cv = s.c.component(0);
        const auto [mn, mx] = std::minmax_element(cv.begin(), cv.end());
        if (*mn < s.c_min0 - allowance || *mx > s.c_max0 + allowance)
            max_principle_violated = true;
        (void)cfg;
    }
};

BalanceSample balance_sample(const State& s, const SolverConfig& cfg) {
    BalanceSample b;
    b.t = s.t;
    const SymTensorField D = sym_gradient(s.v);
    const SymTensorField S = stress(cfg.stress, s.c, D);
    const std::size_t np = cfg.grid.points();
    double diss = 0.0;
    for (int comp = 0; comp < S.comps(); ++comp) {
        const double mult = S.component_multiplicity(comp);
        auto sc = S.component(comp);
        auto dc = D.component(comp);
        for (std::size_t x = 0; x < np; ++x) diss += mult * sc[x] * dc[x];
    }
    b.dissipation = diss * cfg.grid.cell_volume();

    // conjugate-exponent modular of the stress
    ScalarField p_dual(cfg.grid);
    auto cv = s.c.component(0);
    auto pd = p_dual.mutable_component(0);
    for (std::size_t x = 0; x < np; ++x) {
        const double p = cfg.stress.exponent(cv[x]);
        pd[x] = p / (p - 1.0);
    }
    b.modular_s_dual = modular(S, p_dual);

    if (cfg.forcing.kind != ForcingSpec::Kind::Zero) {
        VectorField f = forcing_at(cfg.forcing, cfg.grid, s.t);
        double power = 0.0;
        for (int d = 0; d < cfg.grid.dim; ++d) {
            auto fd = f.component(d);
            auto vd = s.v.component(d);
            for (std::size_t x = 0; x < np; ++x) power += fd[x] * vd[x];
        }
        b.forcing_power = power * cfg.grid.cell_volume();
    }
    b.v_inf = lp_norm(s.v, kInfNorm);
    return b;
}

}  // namespace

RunReport run(const SolverConfig& cfg, const VectorField& v0, const ScalarField& c0,
              int report_every, int snapshot_every) {
    if (report_every < 1) throw InvalidParameter("run: report_every must be >= 1");
    RunReport report;
    State s = init_state(v0, c0, cfg);

    MonitorAccumulator monitors;
    monitors.observe(s, cfg);
    report.rows.push_back(
        make_energy_report(cfg.stress.exponent, s.t, s.v, s.v_dot, s.c, s.c_dot, cfg.q));
    report.balance.push_back(balance_sample(s, cfg));
    if (snapshot_every > 0) report.snapshots.push_back({s.t, s.v, s.c});

    const double t_stop = cfg.t_end * (1.0 - 1e-12);
    long step_index = 0;
    try {
        while (s.t < t_stop) {
            step(s, cfg);
            ++step_index;
            monitors.observe(s, cfg);
            const bool last = s.t >= t_stop;
            if (step_index % report_every == 0 || last) {
                report.rows.push_back(make_energy_report(cfg.stress.exponent, s.t, s.v, s.v_dot,
                                                         s.c, s.c_dot, cfg.q));
                report.balance.push_back(balance_sample(s, cfg));
                if (report.rows.back().zeta > cfg.blowup_threshold)
                    throw BlowUpDetected("zeta crossed the blow-up threshold", s.t);
            }
            if (snapshot_every > 0 && (step_index % snapshot_every == 0 || last))
                report.snapshots.push_back({s.t, s.v, s.c});
        }
        report.termination = Termination::Completed;
    } catch (const BlowUpDetected&) {
        report.termination = Termination::BlowUpDetected;
    }
    report.end_time = s.t;
    report.max_div_rel = monitors.max_div_rel;
    report.mass_drift_rel = monitors.mass_drift_rel;
    report.max_principle_violated = monitors.max_principle_violated;
    return report;
}

namespace {

double separation(const State& a, const State& b) {
    VectorField dv = a.v;
    {
        auto& vals = dv.mutable_values();
        const auto& other = b.v.values();
        for (std::size_t x = 0; x < vals.size(); ++x) vals[x] -= other[x];
    }
    ScalarField dc = a.c;
    {
        auto& vals = dc.mutable_values();
        const auto& other = b.c.values();
        for (std::size_t x = 0; x < vals.size(); ++x) vals[x] -= other[x];
    }
    const double dv2 = lp_norm(dv, 2.0);
    const double gdc = sobolev_seminorm(dc, 1, 2.0);
    return dv2 * dv2 + gdc * gdc;
}

double weighted_difference(const State& a, const State& b, const StressModel& m) {
    const SymTensorField D1 = sym_gradient(a.v);
    const SymTensorField D2 = sym_gradient(b.v);
    auto c1 = a.c.component(0);
    const std::size_t np = a.v.grid().points();
    const int dim = a.v.grid().dim;
    double acc = 0.0;
    for (std::size_t x = 0; x < np; ++x) {
        double d1 = 0.0, d2 = 0.0, dd = 0.0;
        for (int comp = 0; comp < sym_components(dim); ++comp) {
            const double mult = sym_multiplicity(dim, comp);
            const double e1 = D1.at(comp, x);
            const double e2 = D2.at(comp, x);
            d1 += mult * e1 * e1;
            d2 += mult * e2 * e2;
            dd += mult * (e1 - e2) * (e1 - e2);
        }
        const double p = m.exponent(c1[x]);
        acc += std::pow(1.0 + d1 + d2, 0.5 * (p - 2.0)) * dd;
    }
    return acc * a.v.grid().cell_volume();
}

}  // namespace

ContractionReport twin_run(const SolverConfig& cfg, const VectorField& v0,
                           const ScalarField& c0, double eps, const VectorField& w,
                           int report_every) {
    if (eps < 0.0) throw InvalidParameter("twin_run: eps must be >= 0");
    if (report_every < 1) throw InvalidParameter("twin_run: report_every must be >= 1");
    if (!(w.grid() == cfg.grid)) throw GridMismatch("twin_run: perturbation on wrong grid");

    VectorField v0b = v0;
    {
        auto& vals = v0b.mutable_values();
        const auto& wv = w.values();
        for (std::size_t x = 0; x < vals.size(); ++x) vals[x] += eps * wv[x];
    }

    ContractionReport rep;
    rep.eps = eps;
    State s1 = init_state(v0, c0, cfg);
    State s2 = init_state(v0b, c0, cfg);

    rep.times.push_back(0.0);
    rep.delta.push_back(separation(s1, s2));
    rep.weighted_diff.push_back(weighted_difference(s1, s2, cfg.stress));

    const double t_stop = cfg.t_end * (1.0 - 1e-12);
    long step_index = 0;
    try {
        while (s1.t < t_stop) {
            check_blowup(s1, cfg);
            check_blowup(s2, cfg);
            double dt = std::min(cfl_dt(s1, cfg), cfl_dt(s2, cfg));
            dt = std::min(dt, cfg.t_end - s1.t);
            if (!(dt > 0.0)) break;
            step_with_dt(s1, cfg, dt);
            step_with_dt(s2, cfg, dt);
            ++step_index;
            if (step_index % report_every == 0 || s1.t >= t_stop) {
                rep.times.push_back(s1.t);
                rep.delta.push_back(separation(s1, s2));
                rep.weighted_diff.push_back(weighted_difference(s1, s2, cfg.stress));
            }
        }
        rep.termination = Termination::Completed;
    } catch (const BlowUpDetected&) {
        rep.termination = Termination::BlowUpDetected;
    }

    // least-squares envelope rate on log delta over the positive samples
    {
        double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
        std::size_t m = 0;
        for (std::size_t i = 0; i < rep.times.size(); ++i) {
            if (rep.delta[i] <= 0.0) continue;
            const double y = std::log(rep.delta[i]);
            st += rep.times[i];
            sy += y;
            stt += rep.times[i] * rep.times[i];
            sty += rep.times[i] * y;
            ++m;
        }
        const double denom = static_cast<double>(m) * stt - st * st;
        rep.lambda_fit = (m >= 2 && denom > 0.0)
                             ? (static_cast<double>(m) * sty - st * sy) / denom
                             : 0.0;
    }
    return rep;
}

}  // namespace synovia
