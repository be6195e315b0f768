#pragma once

// Jacobian determinant of a planar map, its complex reformulation, and the
// polarisation identity.  With h = u1 + i*u2 and v = d_bar(h),
//   det(grad u) = |d h|^2 - |d_bar h|^2 = |Sv|^2 - |v|^2,
// which holds pointwise for the discrete spectral operators because
// S d_bar = d is exact at the multiplier level.

#include "beurlab/beurling.hpp"

namespace beurlab {

/// det(d_i u_j) computed with the grid's derivative operators (spectral on
/// the torus, fourth-order differences on the bounded square). Real-valued.
inline ComplexField jacobian(const VectorField2& u) {
    const ComplexField f1(u.grid, [&] {
        std::vector<Complex> v(u.u1.size());
        for (size_t i = 0; i < u.u1.size(); ++i) v[i] = Complex(u.u1[i], 0.0);
        return v;
    }());
    const ComplexField f2(u.grid, [&] {
        std::vector<Complex> v(u.u2.size());
        for (size_t i = 0; i < u.u2.size(); ++i) v[i] = Complex(u.u2[i], 0.0);
        return v;
    }());
    ComplexField d1u1 = partial(f1, 0), d2u1 = partial(f1, 1);
    ComplexField d1u2 = partial(f2, 0), d2u2 = partial(f2, 1);
    std::vector<Complex> det(u.grid.count());
    for (long i = 0; i < static_cast<long>(det.size()); ++i)
        det[i] = Complex(d1u1[i].real() * d2u2[i].real() - d2u1[i].real() * d1u2[i].real(), 0.0);
    return ComplexField(u.grid, std::move(det));
}

/// |Sv|^2 - |v|^2 on the torus; equals jacobian(u) for the map recovered via
/// solve_dbar. Requires mean-zero v.
inline ComplexField jacobian_complex(const ComplexField& v) {
    if (!v.grid().periodic)
        throw BackendGridMismatch("jacobian_complex requires a periodic grid");
    const double norm2 = lp_norm(v, 2.0);
    if (std::abs(mean(v)) > 1e-10 * norm2 && norm2 > 0.0)
        throw NonZeroMean("jacobian_complex requires a mean-zero datum");
    ComplexField sv = beurling(v, Backend::spectral);
    std::vector<Complex> out(v.size());
    for (long i = 0; i < v.size(); ++i)
        out[i] = Complex(std::norm(sv[i]) - std::norm(v[i]), 0.0);
    return ComplexField(v.grid(), std::move(out));
}

/// Polarisation: a*conj(b) = (1/4) sum_{eps in {1,-1,i,-i}} eps |a + eps b|^2,
/// evaluated pointwise.
inline ComplexField polarize(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    static const Complex eps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    std::vector<Complex> out(a.size());
    for (long i = 0; i < a.size(); ++i) {
        Complex s{0.0, 0.0};
        for (const Complex& e : eps) s += e * std::norm(a[i] + e * b[i]);
        out[i] = 0.25 * s;
    }
    return ComplexField(a.grid(), std::move(out));
}

} // namespace beurlab
