#ifndef SYNOVIA_SYM_TENSOR_HPP
#define SYNOVIA_SYM_TENSOR_HPP

#include <array>
#include <cmath>

#include "synovia/field.hpp"

namespace synovia {

/// Pointwise symmetric dim x dim tensor (dim 2 or 3), packed upper
/// triangle in the same order as SymTensorField components.
struct SymTensor {
    int dim = 3;
    std::array<double, 6> a{};  // packed entries; unused slots stay zero

    static SymTensor zero(int dim) { return SymTensor{dim, {}}; }

    double operator()(int i, int j) const { return a[static_cast<std::size_t>(sym_index(dim, i, j))]; }
    void set(int i, int j, double v) { a[static_cast<std::size_t>(sym_index(dim, i, j))] = v; }

    int packed_size() const { return sym_components(dim); }

    double frobenius_sq() const {
        double s = 0.0;
        for (int c = 0; c < packed_size(); ++c)
            s += sym_multiplicity(dim, c) * a[static_cast<std::size_t>(c)] * a[static_cast<std::size_t>(c)];
        return s;
    }
    double frobenius() const { return std::sqrt(frobenius_sq()); }

    /// Full contraction A:B = sum_ij A_ij B_ij.
    double dot(const SymTensor& b) const {
        double s = 0.0;
        for (int c = 0; c < packed_size(); ++c)
            s += sym_multiplicity(dim, c) * a[static_cast<std::size_t>(c)] * b.a[static_cast<std::size_t>(c)];
        return s;
    }

    SymTensor& operator+=(const SymTensor& b) {
        for (int c = 0; c < packed_size(); ++c) a[static_cast<std::size_t>(c)] += b.a[static_cast<std::size_t>(c)];
        return *this;
    }
    SymTensor& operator-=(const SymTensor& b) {
        for (int c = 0; c < packed_size(); ++c) a[static_cast<std::size_t>(c)] -= b.a[static_cast<std::size_t>(c)];
        return *this;
    }
    SymTensor& operator*=(double s) {
        for (int c = 0; c < packed_size(); ++c) a[static_cast<std::size_t>(c)] *= s;
        return *this;
    }

    friend SymTensor operator+(SymTensor x, const SymTensor& y) { return x += y; }
    friend SymTensor operator-(SymTensor x, const SymTensor& y) { return x -= y; }
    friend SymTensor operator*(double s, SymTensor x) { return x *= s; }

    /// Read the tensor at one sample of a SymTensorField.
    static SymTensor at(const SymTensorField& f, std::size_t idx) {
        SymTensor t = zero(f.grid().dim);
        for (int c = 0; c < t.packed_size(); ++c) t.a[static_cast<std::size_t>(c)] = f.at(c, idx);
        return t;
    }
};

}  // namespace synovia

#endif
