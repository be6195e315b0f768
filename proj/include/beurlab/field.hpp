#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "beurlab/grid.hpp"

namespace beurlab {

/// Complex-valued function sampled on a GridSpec, the universal carrier for
/// symbols, witnesses and operator inputs/outputs.  Immutable after
/// construction; all values are checked finite.
class ComplexField {
public:
    ComplexField(GridSpec grid, std::vector<Complex> samples)
        : grid_(grid), samples_(std::move(samples)) {
        if (static_cast<long>(samples_.size()) != grid_.count())
            throw InvalidArgument("field sample count does not match grid");
        for (const Complex& z : samples_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw InvalidArgument("field contains a non-finite sample");
    }

    static ComplexField zero(const GridSpec& grid) {
        return ComplexField(grid, std::vector<Complex>(grid.count(), Complex{0.0, 0.0}));
    }

    /// Sample f(z) at every node.
    template <class F>
    static ComplexField sample(const GridSpec& grid, F&& f) {
        std::vector<Complex> v(grid.count());
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix)
                v[grid.index(ix, iy)] = Complex(f(grid.node(ix, iy)));
        return ComplexField(grid, std::move(v));
    }

    const GridSpec& grid() const { return grid_; }
    const std::vector<Complex>& samples() const { return samples_; }
    long size() const { return static_cast<long>(samples_.size()); }
    const Complex& operator[](long i) const { return samples_[i]; }
    const Complex& at(int ix, int iy) const { return samples_[grid_.index(ix, iy)]; }

private:
    GridSpec grid_;
    std::vector<Complex> samples_;
};

/// Real vector field u = (u1, u2) on a shared grid, u : R^2 -> R^2.
struct VectorField2 {
    GridSpec grid;
    std::vector<double> u1, u2;

    VectorField2(GridSpec g, std::vector<double> a, std::vector<double> b)
        : grid(g), u1(std::move(a)), u2(std::move(b)) {
        if (static_cast<long>(u1.size()) != grid.count() || static_cast<long>(u2.size()) != grid.count())
            throw InvalidArgument("vector field component size does not match grid");
        for (double x : u1)
            if (!std::isfinite(x)) throw InvalidArgument("vector field contains a non-finite sample");
        for (double x : u2)
            if (!std::isfinite(x)) throw InvalidArgument("vector field contains a non-finite sample");
    }

    /// Complex packing h = u1 + i*u2.
    ComplexField packed() const {
        std::vector<Complex> v(u1.size());
        for (size_t i = 0; i < u1.size(); ++i) v[i] = Complex(u1[i], u2[i]);
        return ComplexField(grid, std::move(v));
    }

    /// Unpack h = u1 + i*u2 into components.
    static VectorField2 from_packed(const ComplexField& h) {
        std::vector<double> a(h.size()), b(h.size());
        for (long i = 0; i < h.size(); ++i) {
            a[i] = h[i].real();
            b[i] = h[i].imag();
        }
        return VectorField2(h.grid(), std::move(a), std::move(b));
    }
};

inline void require_same_grid(const ComplexField& a, const ComplexField& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch("fields live on different grids");
}

// Pointwise arithmetic. Everything returns a fresh field (value semantics).

inline ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    std::vector<Complex> v(a.size());
    for (long i = 0; i < a.size(); ++i) v[i] = a[i] + b[i];
    return ComplexField(a.grid(), std::move(v));
}

inline ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    std::vector<Complex> v(a.size());
    for (long i = 0; i < a.size(); ++i) v[i] = a[i] - b[i];
    return ComplexField(a.grid(), std::move(v));
}

inline ComplexField operator*(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    std::vector<Complex> v(a.size());
    for (long i = 0; i < a.size(); ++i) v[i] = a[i] * b[i];
    return ComplexField(a.grid(), std::move(v));
}

inline ComplexField operator*(Complex c, const ComplexField& a) {
    std::vector<Complex> v(a.size());
    for (long i = 0; i < a.size(); ++i) v[i] = c * a[i];
    return ComplexField(a.grid(), std::move(v));
}

inline ComplexField conj(const ComplexField& a) {
    std::vector<Complex> v(a.size());
    for (long i = 0; i < a.size(); ++i) v[i] = std::conj(a[i]);
    return ComplexField(a.grid(), std::move(v));
}

/// |f|^2 as a (real-valued) field.
inline ComplexField abs_squared(const ComplexField& a) {
    std::vector<Complex> v(a.size());
    for (long i = 0; i < a.size(); ++i) v[i] = Complex(std::norm(a[i]), 0.0);
    return ComplexField(a.grid(), std::move(v));
}

inline double max_abs(const ComplexField& a) {
    double m = 0.0;
    for (long i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

} // namespace beurlab
