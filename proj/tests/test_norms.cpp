#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "synovia/errors.hpp"
#include "synovia/norms.hpp"
#include "synovia/spectral.hpp"

using namespace synovia;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_SUITE("norms") {

TEST_CASE("lp_norm of the unit field is 1 (unit torus)") {
    const GridSpec g = make_grid(3, 16, 5);
    const ScalarField one = sample_scalar(g, [](const Point&) { return 1.0; });
    for (double r : {1.0, 1.5, 2.0, 4.0, kInfNorm})
        CHECK(lp_norm(one, r) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("lp_norm of a sine mode") {
    const GridSpec g = make_grid(2, 64, 21);
    const ScalarField f =
        sample_scalar(g, [](const Point& x) { return std::sin(kTwoPi * x[0]); });
    CHECK(lp_norm(f, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(lp_norm(f, kInfNorm) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(lp_norm(f, 0.5), InvalidParameter);
}

TEST_CASE("modular reduces to lp powers for constant exponents") {
    const GridSpec g = make_grid(2, 32, 10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    ScalarField f(g);
    for (auto& x : f.mutable_values()) x = unit(rng);

    const ScalarField two = sample_scalar(g, [](const Point&) { return 2.0; });
    const double l2 = lp_norm(f, 2.0);
    CHECK(modular(f, two) == doctest::Approx(l2 * l2).epsilon(1e-12));

    const ScalarField one = sample_scalar(g, [](const Point&) { return 1.0; });
    CHECK(modular(one, two) == doctest::Approx(1.0).epsilon(1e-13));

    const ScalarField f2 = sample_scalar(g, [](const Point&) { return 2.0; });
    const ScalarField p15 = sample_scalar(g, [](const Point&) { return 1.5; });
    CHECK(modular(f2, p15) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-13));
}

TEST_CASE("modular rejects bad exponent fields") {
    const GridSpec g = make_grid(2, 16, 5);
    ScalarField f(g);
    ScalarField p = sample_scalar(g, [](const Point&) { return 0.5; });
    CHECK_THROWS_AS(modular(f, p), InvalidParameter);
    const GridSpec other = make_grid(2, 32, 10);
    ScalarField p2(other);
    CHECK_THROWS_AS(modular(f, p2), GridMismatch);
}

TEST_CASE("sobolev seminorms of a sine mode") {
    const GridSpec g = make_grid(2, 64, 21);
    const ScalarField f =
        sample_scalar(g, [](const Point& x) { return std::sin(kTwoPi * x[0]); });
    const ScalarField c = sample_scalar(g, [](const Point&) { return 7.0; });
    CHECK(sobolev_seminorm(c, 1, 2.0) < 1e-12);
    CHECK(sobolev_seminorm(f, 1, 2.0) ==
          doctest::Approx(kTwoPi / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sobolev_seminorm(f, 2, 2.0) ==
          doctest::Approx(kTwoPi * kTwoPi / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sobolev_seminorm(f, 0, 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(sobolev_seminorm(f, 3, 2.0), InvalidParameter);
}

TEST_CASE("vector and tensor magnitudes use Frobenius with multiplicity") {
    const GridSpec g = make_grid(2, 16, 5);
    SymTensorField T(g);
    // off-diagonal entry 3 -> |T|^2 = 2 * 9 = 18 everywhere
    for (auto& x : T.mutable_component(sym_index(2, 0, 1))) x = 3.0;
    CHECK(lp_norm(T, 2.0) == doctest::Approx(std::sqrt(18.0)).epsilon(1e-13));
    CHECK(lp_norm(T, kInfNorm) == doctest::Approx(std::sqrt(18.0)).epsilon(1e-13));
}

}  // TEST_SUITE
