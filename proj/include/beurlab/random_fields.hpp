#pragma once

// Deterministic random test fields.

#include "beurlab/fft.hpp"
#include "beurlab/rng.hpp"

namespace beurlab {

/// Complex white noise (independent standard normals per node).
inline ComplexField random_field(const GridSpec& grid, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Complex> v(grid.count());
    for (Complex& z : v) {
        const double re = rng.normal();
        z = Complex(re, rng.normal());
    }
    return ComplexField(grid, std::move(v));
}

/// Mean-zero complex white noise.
inline ComplexField random_field_mean_zero(const GridSpec& grid, std::uint64_t seed) {
    ComplexField f = random_field(grid, seed);
    const Complex m = [&] {
        Complex s{0.0, 0.0};
        for (long i = 0; i < f.size(); ++i) s += f[i];
        return s / static_cast<double>(f.size());
    }();
    std::vector<Complex> v(f.size());
    for (long i = 0; i < f.size(); ++i) v[i] = f[i] - m;
    return ComplexField(grid, std::move(v));
}

/// Band-limited field on the torus: random Fourier coefficients on modes
/// with |k1|, |k2| <= max_mode, zero elsewhere; mean-zero when requested.
inline ComplexField random_band_limited(const GridSpec& grid, int max_mode, std::uint64_t seed,
                                        bool mean_zero = true) {
    if (!grid.periodic) throw BackendGridMismatch("band-limited fields require a periodic grid");
    if (max_mode < 1 || max_mode >= grid.n / 2)
        throw InvalidArgument("max_mode must lie in [1, n/2)");
    Rng rng(seed);
    const int n = grid.n;
    std::vector<Complex> coeff(grid.count(), Complex{0.0, 0.0});
    for (int ky = 0; ky < n; ++ky) {
        const int f2 = fft_freq(ky, n);
        for (int kx = 0; kx < n; ++kx) {
            const int f1 = fft_freq(kx, n);
            if (std::abs(f1) > max_mode || std::abs(f2) > max_mode) continue;
            if (mean_zero && f1 == 0 && f2 == 0) continue;
            const double re = rng.normal();
            coeff[static_cast<long>(ky) * n + kx] = Complex(re, rng.normal());
        }
    }
    return fft_inverse(grid, std::move(coeff));
}

/// Real band-limited field (real part of a complex one, rescaled).
inline std::vector<double> random_band_limited_real(const GridSpec& grid, int max_mode,
                                                    std::uint64_t seed, bool mean_zero = true) {
    ComplexField f = random_band_limited(grid, max_mode, seed, mean_zero);
    std::vector<double> v(f.size());
    for (long i = 0; i < f.size(); ++i) v[i] = f[i].real();
    return v;
}

} // namespace beurlab
