#ifndef SYNOVIA_SOLVER_HPP
#define SYNOVIA_SOLVER_HPP

#include <array>
#include <string>
#include <vector>

#include "synovia/energies.hpp"
#include "synovia/field.hpp"
#include "synovia/stress.hpp"

namespace synovia {

/// External body force. SingleMode is amplitude * cos(2 pi k.x) e_i;
/// TimeRamp scales the same shape by (amplitude + rate * t); Custom is a
/// piecewise-linear-in-time series of sampled fields.
struct ForcingSpec {
    enum class Kind { Zero, SingleMode, TimeRamp, Custom };
    Kind kind = Kind::Zero;
    std::array<int, 3> mode{1, 0, 0};
    int component = 0;
    double amplitude = 0.0;
    double ramp_rate = 0.0;
    std::vector<double> sample_times;
    std::vector<VectorField> sample_fields;

    static ForcingSpec zero() { return {}; }
    static ForcingSpec single_mode(std::array<int, 3> k, double amplitude, int component);
    static ForcingSpec time_ramp(std::array<int, 3> k, double base, double rate, int component);
    static ForcingSpec custom(std::vector<double> times, std::vector<VectorField> fields);
};

/// Throws InvalidParameter unless the forcing is resolved by the grid and
/// has finite data norms over [0, t_end].
void validate_forcing(const ForcingSpec& f, const GridSpec& grid, double t_end);

VectorField forcing_at(const ForcingSpec& f, const GridSpec& grid, double t);

/// ||f(t)||_2^2 and ||dt f(t)||_2^2; the data floor of the Grönwall fit.
double forcing_norm2_sq(const ForcingSpec& f, const GridSpec& grid, double t);
double forcing_dt_norm2_sq(const ForcingSpec& f, const GridSpec& grid, double t);

enum class Scheme { ImexEuler, ImexRk2 };

struct SolverConfig {
    GridSpec grid;
    StressModel stress;
    double q = 4.0;      // Grönwall monitor exponent
    double delta = 0.05; // mollification radius for c0
    double dt = 1e-4;
    double t_end = 0.1;
    ForcingSpec forcing;
    Scheme scheme = Scheme::ImexEuler;
    double blowup_threshold = 1e8;
    /// Permissive mode for verification studies: p bounds outside the
    /// 3D strong-solution regime are allowed without complaint.
    bool analysis_mode = false;
};

/// Validates dt, t_end, delta, q-per-dimension and the exponent regime.
/// Returns a human-readable warning (empty if none) for regimes that are
/// permitted but outside the 3D strong-solution assumptions.
std::string validate_config(const SolverConfig& cfg);

struct State {
    VectorField v;      // divergence-free, |k|_inf <= K, zero mean
    ScalarField c;
    VectorField v_dot;  // discrete time derivative (from the equation at t = 0)
    ScalarField c_dot;
    double t = 0.0;
    double c_mass0 = 0.0;
    double c_min0 = 0.0;
    double c_max0 = 0.0;
    double max_principle_slack = 0.0;  // accumulated advective allowance
};

State init_state(const VectorField& v0, const ScalarField& c0, const SolverConfig& cfg);

/// Projected, truncated explicit tendency
///   P_K P_L [ -(v.grad)v + div S(c,Dv) + f(t) ],
/// with the full stress when `split_newtonian` is false and the stress
/// remainder S - 2 nu0 D when true (the IMEX splitting handles the
/// Newtonian part exactly in spectral space).
VectorField velocity_tendency(const State& s, const SolverConfig& cfg, double t,
                              bool split_newtonian = false);

/// One IMEX step. dt adapts downward to the CFL limit 0.25 h / ||v||_inf
/// and to land exactly on t_end; never above cfg.dt. Throws
/// BlowUpDetected when a monitored norm crosses cfg.blowup_threshold or
/// turns non-finite.
void step(State& s, const SolverConfig& cfg);

struct PressureField {
    ScalarField pi;  // mean-zero
};

/// Diagnostic pressure from the de-Rham-style Poisson solve
///   -Lap pi = div [ (v.grad)v - div S(c,Dv) - f ].
PressureField recover_pressure(const State& s, const SolverConfig& cfg, double t);

enum class Termination { Completed, BlowUpDetected };

/// Extra per-sample series used by the energy-balance verification.
struct BalanceSample {
    double t = 0.0;
    double dissipation = 0.0;     // integral S : Dv
    double modular_s_dual = 0.0;  // integral |S|^{p'(c)}
    double forcing_power = 0.0;   // integral f . v
    double v_inf = 0.0;
};

struct Snapshot {
    double t = 0.0;
    VectorField v;
    ScalarField c;
};

struct RunReport {
    std::vector<EnergyReport> rows;
    std::vector<BalanceSample> balance;
    std::vector<Snapshot> snapshots;
    Termination termination = Termination::Completed;
    double end_time = 0.0;
    double max_div_rel = 0.0;      // worst spectral divergence seen
    double mass_drift_rel = 0.0;   // worst relative drift of integral c
    bool max_principle_violated = false;
};

/// Integrate to cfg.t_end (or the detected horizon), recording monitor
/// rows every `report_every` steps (plus t = 0 and the final state) and
/// snapshots every `snapshot_every` steps (0 = none).
RunReport run(const SolverConfig& cfg, const VectorField& v0, const ScalarField& c0,
              int report_every, int snapshot_every = 0);

struct ContractionReport {
    std::vector<double> times;
    std::vector<double> delta;          // ||v1-v2||_2^2 + ||grad(c1-c2)||_2^2
    std::vector<double> weighted_diff;  // Lemma-2.2-type weighted distance
    double eps = 0.0;
    double lambda_fit = 0.0;  // envelope rate: delta(t) <= delta(0) e^{lambda t}
    Termination termination = Termination::Completed;
};

/// Evolve (v0, c0) and (v0 + eps w, c0) in lockstep and record the
/// squared separation series. w must be divergence-free with unit L^2
/// norm; eps = 0 degenerates to identical trajectories.
ContractionReport twin_run(const SolverConfig& cfg, const VectorField& v0,
                           const ScalarField& c0, double eps, const VectorField& w,
                           int report_every);

}  // namespace synovia

#endif
