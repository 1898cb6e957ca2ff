#include "synovia/field.hpp"

#include <cmath>
#include <string>

#include "synovia/errors.hpp"
#include "synovia/fft.hpp"

namespace synovia {

int sym_index(int dim, int i, int j) {
    if (i > j) std::swap(i, j);
    // row-by-row upper triangle: offset of row i is i*dim - i*(i-1)/2
    return i * dim - i * (i - 1) / 2 + (j - i);
}

int sym_multiplicity(int dim, int comp) {
    for (int i = 0; i < dim; ++i)
        if (comp == sym_index(dim, i, i)) return 1;
    return 2;
}

Field::Field(const GridSpec& grid, int comps, FieldKind kind)
    : grid_(grid),
      comps_(comps),
      kind_(kind),
      values_(static_cast<std::size_t>(comps) * grid.points(), 0.0) {}

int Field::component_multiplicity(int c) const {
    return kind_ == FieldKind::SymTensor ? sym_multiplicity(grid_.dim, c) : 1;
}

std::span<const double> Field::component(int c) const {
    const std::size_t np = grid_.points();
    return {values_.data() + static_cast<std::size_t>(c) * np, np};
}

std::span<double> Field::mutable_component(int c) {
    spectral_valid_ = false;
    const std::size_t np = grid_.points();
    return {values_.data() + static_cast<std::size_t>(c) * np, np};
}

std::vector<double>& Field::mutable_values() {
    spectral_valid_ = false;
    return values_;
}

double& Field::at(int c, std::size_t idx) {
    spectral_valid_ = false;
    return values_[static_cast<std::size_t>(c) * grid_.points() + idx];
}

const std::vector<cplx>& Field::spectral() const {
    if (!spectral_valid_) {
        const std::size_t np = grid_.points();
        const std::size_t ns = grid_.spectral_points();
        spectral_.assign(static_cast<std::size_t>(comps_) * ns, cplx{0.0, 0.0});
        for (int c = 0; c < comps_; ++c) {
            fft_forward(grid_, {values_.data() + static_cast<std::size_t>(c) * np, np},
                        {spectral_.data() + static_cast<std::size_t>(c) * ns, ns});
        }
        spectral_valid_ = true;
    }
    return spectral_;
}

std::span<const cplx> Field::spectral_component(int c) const {
    const std::size_t ns = grid_.spectral_points();
    return {spectral().data() + static_cast<std::size_t>(c) * ns, ns};
}

void Field::assign_spectral(std::vector<cplx> coeffs) {
    const std::size_t np = grid_.points();
    const std::size_t ns = grid_.spectral_points();
    if (coeffs.size() != static_cast<std::size_t>(comps_) * ns)
        throw InvalidParameter("spectral coefficient count mismatch");
    spectral_ = std::move(coeffs);
    for (int c = 0; c < comps_; ++c) {
        fft_inverse(grid_, {spectral_.data() + static_cast<std::size_t>(c) * ns, ns},
                    {values_.data() + static_cast<std::size_t>(c) * np, np});
    }
    spectral_valid_ = true;
}

bool Field::is_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double Field::component_mean(int c) const {
    double s = 0.0;
    for (double v : component(c)) s += v;
    return s / static_cast<double>(grid_.points());
}

Point grid_point(const GridSpec& grid, std::size_t idx) {
    const int n = grid.n;
    const double h = grid.h();
    Point x{0.0, 0.0, 0.0};
    if (grid.dim == 2) {
        x[1] = static_cast<double>(idx % n) * h;
        x[0] = static_cast<double>(idx / n) * h;
    } else {
        x[2] = static_cast<double>(idx % n) * h;
        x[1] = static_cast<double>((idx / n) % n) * h;
        x[0] = static_cast<double>(idx / (static_cast<std::size_t>(n) * n)) * h;
    }
    return x;
}

ScalarField sample_scalar(const GridSpec& grid, const std::function<double(const Point&)>& f) {
    ScalarField out(grid);
    auto vals = out.mutable_component(0);
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f(grid_point(grid, i));
    return out;
}

VectorField sample_vector(const GridSpec& grid,
                          const std::function<std::array<double, 3>(const Point&)>& f) {
    VectorField out(grid);
    const std::size_t np = grid.points();
    for (std::size_t i = 0; i < np; ++i) {
        const auto v = f(grid_point(grid, i));
        for (int c = 0; c < grid.dim; ++c) out.at(c, i) = v[static_cast<std::size_t>(c)];
    }
    return out;
}

}  // namespace synovia
