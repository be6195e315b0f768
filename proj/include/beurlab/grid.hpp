#pragma once

#include <complex>
#include <string>

#include "beurlab/errors.hpp"

namespace beurlab {

using Complex = std::complex<double>;

/// Uniform n-by-n sampling of a square domain in the complex plane.
///
/// Two backends share the type: a periodic torus (Fourier side of the lab)
/// and a bounded square (exact-kernel quadrature side).  Sample nodes sit at
/// cell centers, origin + h*(j+1/2), so that a square centered at the origin
/// is sampled symmetrically and midpoint quadrature is exact on odd
/// integrands over centered cubes.  The spacing h = length/n is always
/// derived, never stored.
struct GridSpec {
    int n = 0;             ///< samples per axis, power of two in [8, 4096]
    double length = 0.0;   ///< physical side length
    bool periodic = true;  ///< torus vs bounded square
    Complex origin{0.0, 0.0};  ///< lower-left corner of the domain

    double spacing() const { return length / n; }
    double cell_area() const { return spacing() * spacing(); }
    long count() const { return static_cast<long>(n) * n; }

    /// Node coordinate of sample (ix, iy); row-major index iy*n + ix.
    Complex node(int ix, int iy) const {
        const double h = spacing();
        return {origin.real() + h * (ix + 0.5), origin.imag() + h * (iy + 0.5)};
    }
    long index(int ix, int iy) const { return static_cast<long>(iy) * n + ix; }

    bool operator==(const GridSpec&) const = default;
};

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

/// Validated grid constructor. Rejects non-power-of-two n outside [8, 4096]
/// and nonpositive side lengths.
inline GridSpec make_grid(int n, double length, bool periodic, Complex origin = {0.0, 0.0}) {
    if (!is_power_of_two(n) || n < 8 || n > 4096)
        throw InvalidArgument("grid size must be a power of two in [8, 4096], got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidArgument("grid length must be positive and finite");
    if (!std::isfinite(origin.real()) || !std::isfinite(origin.imag()))
        throw InvalidArgument("grid origin must be finite");
    return GridSpec{n, length, periodic, origin};
}

/// Torus of side 2*pi anchored at 0, the default home of the spectral backend.
inline GridSpec make_torus(int n, double length = 6.283185307179586476925287) {
    return make_grid(n, length, true, {0.0, 0.0});
}

/// Bounded square of side `length` centered at the origin.
inline GridSpec make_centered_square(int n, double length) {
    return make_grid(n, length, false, {-length / 2, -length / 2});
}

} // namespace beurlab
