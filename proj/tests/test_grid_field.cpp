#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "synovia/errors.hpp"
#include "synovia/field.hpp"
#include "synovia/grid.hpp"
#include "synovia/norms.hpp"
#include "synovia/run_io.hpp"

using namespace synovia;

namespace {

// deterministic white-noise fill
template <typename F>
void randomize(F& f, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto& x : f.mutable_values()) x = unit(rng);
}

}  // namespace

TEST_SUITE("grid_field") {

TEST_CASE("make_grid accepts the documented shapes") {
    const GridSpec g = make_grid(3, 64, 21);
    CHECK(g.dim == 3);
    CHECK(g.n == 64);
    CHECK(g.K == 21);

    const GridSpec tiny = make_grid(2, 8, 2);
    CHECK(tiny.points() == 64);
    CHECK(tiny.h() == doctest::Approx(0.125));
}

TEST_CASE("make_grid rejects illegal parameters") {
    CHECK_THROWS_AS(make_grid(3, 64, 32), InvalidGrid);  // K > n/3
    CHECK_THROWS_AS(make_grid(4, 64, 10), InvalidGrid);
    CHECK_THROWS_AS(make_grid(3, 48, 10), InvalidGrid);  // not a power of two
    CHECK_THROWS_AS(make_grid(3, 4, 1), InvalidGrid);    // below minimum
    CHECK_THROWS_AS(make_grid(3, 64, 0), InvalidGrid);
}

TEST_CASE("sym tensor packing") {
    CHECK(sym_components(2) == 3);
    CHECK(sym_components(3) == 6);
    CHECK(sym_index(3, 0, 0) == 0);
    CHECK(sym_index(3, 0, 2) == 2);
    CHECK(sym_index(3, 2, 0) == 2);
    CHECK(sym_index(3, 1, 1) == 3);
    CHECK(sym_index(3, 2, 2) == 5);
    CHECK(sym_multiplicity(3, 0) == 1);
    CHECK(sym_multiplicity(3, 1) == 2);
    CHECK(sym_multiplicity(3, 3) == 1);
}

TEST_CASE("grid_point decodes row-major layout, last axis fastest") {
    const GridSpec g = make_grid(2, 8, 2);
    const Point p0 = grid_point(g, 0);
    CHECK(p0[0] == 0.0);
    CHECK(p0[1] == 0.0);
    const Point p1 = grid_point(g, 1);
    CHECK(p1[1] == doctest::Approx(0.125));
    const Point prow = grid_point(g, 8);
    CHECK(prow[0] == doctest::Approx(0.125));
    CHECK(prow[1] == 0.0);
}

TEST_CASE("spectral round trip reproduces physical samples") {
    for (int dim : {2, 3}) {
        const GridSpec g = make_grid(dim, 16, 5);
        ScalarField s(g);
        randomize(s, 11);
        VectorField v(g);
        randomize(v, 22);
        SymTensorField T(g);
        randomize(T, 33);

        for (const Field* f : {static_cast<const Field*>(&s), static_cast<const Field*>(&v),
                               static_cast<const Field*>(&T)}) {
            Field copy = *f;
            std::vector<cplx> coeffs(f->spectral());
            copy.assign_spectral(std::move(coeffs));
            double scale = lp_norm(*f, kInfNorm);
            for (std::size_t i = 0; i < copy.values().size(); ++i)
                CHECK(std::abs(copy.values()[i] - f->values()[i]) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("Parseval consistency of the half spectrum") {
    const GridSpec g = make_grid(3, 16, 5);
    VectorField v(g);
    randomize(v, 7);
    const double l2 = lp_norm(v, 2.0);
    CHECK(spectral_energy(v) == doctest::Approx(l2 * l2).epsilon(1e-10));
}

TEST_CASE("field mean and finiteness") {
    const GridSpec g = make_grid(2, 16, 5);
    ScalarField f = sample_scalar(g, [](const Point&) { return 3.5; });
    CHECK(f.mean() == doctest::Approx(3.5));
    CHECK(f.is_finite());
    f.at(0, 5) = std::nan("");
    CHECK_FALSE(f.is_finite());
}

TEST_CASE("TORF snapshot round trip is bit exact") {
    const GridSpec g = make_grid(2, 16, 5);
    VectorField v(g);
    randomize(v, 99);

    const auto dir = std::filesystem::temp_directory_path() / "synovia_torf_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "field.torf").string();
    write_torf(path, v);

    CHECK(peek_torf_kind(path) == FieldKind::Vector);
    const VectorField back = read_torf_vector(path);
    CHECK(back.grid().dim == 2);
    CHECK(back.grid().n == 16);
    REQUIRE(back.values().size() == v.values().size());
    for (std::size_t i = 0; i < v.values().size(); ++i)
        CHECK(back.values()[i] == v.values()[i]);

    CHECK_THROWS_AS(read_torf_scalar(path), IoError);  // rank mismatch
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
