#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "synovia/config.hpp"
#include "synovia/errors.hpp"
#include "synovia/norms.hpp"
#include "synovia/run_io.hpp"
#include "synovia/spectral.hpp"

using namespace synovia;

namespace {

const char* kMinimal2d = R"(
[grid]
dim = 2
n = 64
k = 21

[exponent]
shape = logistic
p_min = 1.2
p_max = 2.0

[time]
t_end = 0.1
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal 2D config resolves documented defaults") {
    const ExperimentSpec spec = parse_config_text(kMinimal2d);
    CHECK(spec.solver.grid.dim == 2);
    CHECK(spec.solver.grid.n == 64);
    CHECK(spec.solver.grid.K == 21);
    CHECK(spec.solver.q == doctest::Approx(3.0));        // 2D default
    CHECK(spec.solver.delta == doctest::Approx(0.05));   // default mollification
    CHECK(spec.solver.scheme == Scheme::ImexEuler);      // default scheme
    CHECK(spec.solver.dt == doctest::Approx(1e-4));
    CHECK(spec.solver.stress.nu0 == doctest::Approx(1.0));
    CHECK(spec.warning.empty());
}

TEST_CASE("3D config with q = 3 is rejected") {
    const std::string text = R"(
[grid]
dim = 3
n = 32
k = 10
[exponent]
shape = logistic
p_min = 1.5
p_max = 2.0
[time]
t_end = 0.01
[monitor]
q = 3
)";
    CHECK_THROWS_AS(parse_config_text(text), ConfigError);
}

TEST_CASE("3D config below the strong-solution regime warns but parses") {
    const std::string text = R"(
[grid]
dim = 3
n = 32
k = 10
[exponent]
shape = logistic
p_min = 1.3
p_max = 2.0
[time]
t_end = 0.01
)";
    const ExperimentSpec spec = parse_config_text(text);
    CHECK(!spec.warning.empty());
}

TEST_CASE("unknown keys are rejected with location diagnostics") {
    const std::string text = R"(
[grid]
dim = 2
n = 64
k = 21
typo_key = 3
[exponent]
shape = logistic
p_min = 1.5
p_max = 2.0
[time]
t_end = 0.1
)";
    try {
        parse_config_text(text, "test.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("test.cfg:6") != std::string::npos);
        CHECK(msg.find("typo_key") != std::string::npos);
    }
}

TEST_CASE("missing required keys and malformed lines") {
    CHECK_THROWS_AS(parse_config_text("[grid]\ndim = 2\nn = 64\nk = 21\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("dim = 2\n"), ConfigError);  // key outside section
    CHECK_THROWS_AS(parse_config_text("[grid\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[grid]\ndim\n"), ConfigError);
}

TEST_CASE("environment variables override file values") {
    setenv("SYNOVIA_GRID_N", "32", 1);
    setenv("SYNOVIA_GRID_K", "10", 1);
    const ExperimentSpec spec = parse_config_text(kMinimal2d);
    unsetenv("SYNOVIA_GRID_N");
    unsetenv("SYNOVIA_GRID_K");
    CHECK(spec.solver.grid.n == 32);
    CHECK(spec.solver.grid.K == 10);
}

TEST_CASE("config hash is deterministic and value-sensitive") {
    const ExperimentSpec a = parse_config_text(kMinimal2d);
    const ExperimentSpec b = parse_config_text(kMinimal2d);
    CHECK(config_hash(a) == config_hash(b));

    std::string other = kMinimal2d;
    other += "\n[run]\nseed = 7\n";
    const ExperimentSpec c = parse_config_text(other);
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("initial fields honour their invariants") {
    std::string text = kMinimal2d;
    text += R"(
[initial]
velocity = random_smooth
v_amplitude = 0.7
v_kmax = 4
concentration = random_smooth
c_mean = 1.0
c_amplitude = 0.2
c_kmax = 4
)";
    const ExperimentSpec spec = parse_config_text(text);
    const VectorField v0 = build_initial_velocity(spec);
    CHECK(lp_norm(v0, 2.0) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(spectral_divergence_rel(v0) < 1e-10);
    const ScalarField c0 = build_initial_concentration(spec);
    CHECK(c0.mean() == doctest::Approx(1.0).epsilon(1e-10));

    const VectorField w = build_twin_perturbation(spec);
    CHECK(lp_norm(w, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spectral_divergence_rel(w) < 1e-10);

    // determinism of seeded data
    const VectorField v0b = build_initial_velocity(spec);
    for (std::size_t i = 0; i < v0.values().size(); ++i)
        CHECK(v0.values()[i] == v0b.values()[i]);
}

TEST_CASE("sweep values rebuild validated configurations") {
    std::string text = kMinimal2d;
    text += "\n[sweep]\nkey = grid.k\nvalues = 5 10 21\n";
    const ExperimentSpec spec = parse_config_text(text);
    REQUIRE(spec.sweep_values.size() == 3);
    const ExperimentSpec k5 = apply_sweep_value(spec, 5);
    CHECK(k5.solver.grid.K == 5);
    CHECK(config_hash(k5) != config_hash(spec));
    CHECK_THROWS_AS(apply_sweep_value(spec, 40), InvalidGrid);  // K > n/3
}

TEST_CASE("run report round trips through the output directory") {
    const ExperimentSpec spec = parse_config_text(kMinimal2d);
    SolverConfig cfg = spec.solver;
    cfg.t_end = 5e-4;
    RunReport r = run(cfg, build_initial_velocity(spec), build_initial_concentration(spec), 1);
    const auto dir = std::filesystem::temp_directory_path() / "synovia_runio_test";
    std::filesystem::remove_all(dir);
    const auto files = write_run_report(dir.string(), r);
    CHECK(files.size() >= 2);
    for (const auto& f : files) CHECK(std::filesystem::exists(f));

    const RunReport back = load_run_report(dir.string());
    REQUIRE(back.rows.size() == r.rows.size());
    REQUIRE(back.balance.size() == r.balance.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(back.rows[i].t == r.rows[i].t);
        CHECK(back.rows[i].zeta == r.rows[i].zeta);
        CHECK(back.rows[i].kinetic == r.rows[i].kinetic);
        CHECK(back.balance[i].dissipation == r.balance[i].dissipation);
    }
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
