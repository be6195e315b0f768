#pragma once

// Thin wrapper around FFTW3 (complex-to-complex, double precision).
// Plans are created with FFTW_ESTIMATE and cached per transform size behind a
// global mutex; execution copies through the plan's own aligned buffers, so
// calls are safe from any thread and results do not depend on thread count.

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "beurlab/field.hpp"

namespace beurlab {
namespace fft_detail {

struct Plan {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    long count = 0;

    Plan(int rows, int cols, int sign) {
        count = static_cast<long>(rows) * cols;
        in = fftw_alloc_complex(count);
        out = fftw_alloc_complex(count);
        plan = fftw_plan_dft_2d(rows, cols, in, out, sign, FFTW_ESTIMATE);
    }
    ~Plan() {
        if (plan) fftw_destroy_plan(plan);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

inline std::mutex& mutex() {
    static std::mutex m;
    return m;
}

inline Plan& plan_for(int rows, int cols, int sign) {
    static std::map<std::tuple<int, int, int>, std::unique_ptr<Plan>> cache;
    auto key = std::make_tuple(rows, cols, sign);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Plan>(rows, cols, sign)).first;
    return *it->second;
}

} // namespace fft_detail

/// In-place unnormalized 2D DFT of row-major data; sign -1 = forward
/// (e^{-i}), +1 = backward.
inline void fft2(int rows, int cols, std::complex<double>* data, int sign) {
    std::lock_guard<std::mutex> lock(fft_detail::mutex());
    fft_detail::Plan& p = fft_detail::plan_for(rows, cols, sign);
    for (long i = 0; i < p.count; ++i) {
        p.in[i][0] = data[i].real();
        p.in[i][1] = data[i].imag();
    }
    fftw_execute(p.plan);
    for (long i = 0; i < p.count; ++i) data[i] = {p.out[i][0], p.out[i][1]};
}

/// Forward DFT of a field's samples (unnormalized coefficient array).
inline std::vector<Complex> fft_forward(const ComplexField& f) {
    std::vector<Complex> c = f.samples();
    fft2(f.grid().n, f.grid().n, c.data(), -1);
    return c;
}

/// Inverse of fft_forward: backward DFT divided by n^2.
inline ComplexField fft_inverse(const GridSpec& grid, std::vector<Complex> coeffs) {
    fft2(grid.n, grid.n, coeffs.data(), +1);
    const double scale = 1.0 / static_cast<double>(grid.count());
    for (Complex& z : coeffs) z *= scale;
    return ComplexField(grid, std::move(coeffs));
}

/// Signed integer frequency of DFT bin k (standard fftfreq layout).
inline int fft_freq(int k, int n) { return k < n / 2 ? k : k - n; }

/// Apply a Fourier multiplier m(zeta), zeta = xi1 + i*xi2, on a periodic grid.
/// The zero mode is multiplied by m(0); every multiplier used in the lab
/// sends it to zero.
template <class M>
ComplexField apply_multiplier(const ComplexField& f, M&& m) {
    if (!f.grid().periodic)
        throw BackendGridMismatch("Fourier multipliers require a periodic grid");
    const int n = f.grid().n;
    const double k0 = 2.0 * 3.14159265358979323846264338327950288 / f.grid().length;
    std::vector<Complex> c = fft_forward(f);
    for (int ky = 0; ky < n; ++ky) {
        const double xi2 = k0 * fft_freq(ky, n);
        for (int kx = 0; kx < n; ++kx) {
            const double xi1 = k0 * fft_freq(kx, n);
            c[static_cast<long>(ky) * n + kx] *= m(Complex(xi1, xi2));
        }
    }
    return fft_inverse(f.grid(), std::move(c));
}

} // namespace beurlab
