#ifndef SYNOVIA_CONFIG_HPP
#define SYNOVIA_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "synovia/solver.hpp"

namespace synovia {

/// A fully resolved experiment: solver configuration plus the named
/// initial data, twin-run and sweep parameters from the config file.
struct ExperimentSpec {
    SolverConfig solver;

    enum class VelocityInit { Zero, ShearMode, TaylorGreen, RandomSmooth };
    enum class ConcentrationInit { Constant, Cosine, RandomSmooth };

    VelocityInit velocity_init = VelocityInit::Zero;
    double v_amplitude = 1.0;
    int v_axis = 1;       // shear mode varies along this axis
    int v_component = 0;  // nonzero velocity component
    int v_kmax = 3;       // band limit of random smooth data

    ConcentrationInit concentration_init = ConcentrationInit::Constant;
    double c_mean = 1.0;
    double c_amplitude = 0.0;
    int c_axis = 0;
    int c_kmax = 3;

    double twin_eps = 1e-5;
    std::array<int, 3> twin_mode{0, 1, 0};
    int twin_component = 0;

    std::string sweep_key;
    std::vector<double> sweep_values;

    std::uint64_t seed = 1;

    /// Non-fatal validation warning (e.g. p_minus outside the 3D
    /// strong-solution regime); empty when clean.
    std::string warning;

    /// Every resolved key=value pair (defaults applied, environment
    /// overrides included); the basis of the deterministic config hash.
    std::map<std::string, std::string> resolved;
};

/// Parse and validate a config file (key = value under [sections]).
/// Unknown sections or keys are rejected with line diagnostics.
/// Environment variables SYNOVIA_<SECTION>_<KEY> override file values.
ExperimentSpec parse_config_file(const std::string& path);
ExperimentSpec parse_config_text(const std::string& text, const std::string& origin = "<memory>");

/// Canonical "section.key=value" lines, sorted; identical resolved
/// configs hash identically.
std::string canonical_config(const ExperimentSpec& spec);
std::uint64_t config_hash(const ExperimentSpec& spec);

VectorField build_initial_velocity(const ExperimentSpec& spec);
ScalarField build_initial_concentration(const ExperimentSpec& spec);

/// Divergence-free, unit-L2 perturbation direction for twin runs.
VectorField build_twin_perturbation(const ExperimentSpec& spec);

/// Apply one sweep-axis value ("grid.k", "twin.eps", ...) to a copy of
/// the spec, revalidating the result.
ExperimentSpec apply_sweep_value(const ExperimentSpec& spec, double value);

}  // namespace synovia

#endif
