#pragma once

// The Beurling transform S, three ways.
//
//   spectral          periodic grids; Fourier multiplier conj(zeta)/zeta,
//                     zero mode sent to 0.  Used wherever an identity is a
//                     multiplier identity (S d_bar = d, isometry, S*S = I).
//   quadrature_direct bounded grids; the literal p.v. discretization
//                     h^2 sum_{k != j} K(x_j - x_k) v(x_k) with the diagonal
//                     dropped, Kahan-compensated row sums.
//   quadrature_fft    the same operator evaluated as a zero-padded (2n x 2n)
//                     circular convolution with the sampled free-space
//                     kernel; kernel spectra are cached per grid geometry.
//
// The two quadrature modes are the same linear map evaluated by different
// algorithms; their agreement (<= 1e-12 relative) is a hard invariant.

#include <map>
#include <memory>
#include <mutex>

#include "beurlab/calculus.hpp"
#include "beurlab/kernel.hpp"

namespace beurlab {

enum class Backend { spectral, quadrature_direct, quadrature_fft };

inline const char* to_string(Backend b) {
    switch (b) {
        case Backend::spectral: return "spectral";
        case Backend::quadrature_direct: return "quadrature-direct";
        case Backend::quadrature_fft: return "quadrature-fft";
    }
    return "?";
}

inline Backend parse_backend(const std::string& s) {
    if (s == "spectral") return Backend::spectral;
    if (s == "quadrature-direct") return Backend::quadrature_direct;
    if (s == "quadrature-fft") return Backend::quadrature_fft;
    throw ConfigError("unknown backend '" + s + "'");
}

inline bool is_quadrature(Backend b) { return b != Backend::spectral; }

inline void require_backend_grid(const GridSpec& grid, Backend backend) {
    if (backend == Backend::spectral && !grid.periodic)
        throw BackendGridMismatch("spectral backend requires a periodic grid");
    if (is_quadrature(backend) && grid.periodic)
        throw BackendGridMismatch("quadrature backends require a bounded grid");
}

namespace beurling_detail {

/// Beurling multiplier m(zeta) = conj(zeta)/zeta, m(0) = 0.
inline Complex multiplier(Complex zeta) {
    if (zeta == Complex(0.0, 0.0)) return {0.0, 0.0};
    return std::conj(zeta) / zeta;
}

inline ComplexField apply_spectral(const ComplexField& v) {
    return apply_multiplier(v, multiplier);
}

inline ComplexField apply_direct(const ComplexField& v) {
    const GridSpec& g = v.grid();
    const int n = g.n;
    const double h = g.spacing();
    const double inv_pi = 1.0 / kPi;
    std::vector<Complex> out(v.size());
    for (int jy = 0; jy < n; ++jy) {
        for (int jx = 0; jx < n; ++jx) {
            KahanSumComplex acc;
            for (int ky = 0; ky < n; ++ky) {
                const double dy = h * (jy - ky);
                for (int kx = 0; kx < n; ++kx) {
                    if (kx == jx && ky == jy) continue;
                    // -1/(pi z^2) = -conj(z^2)/(pi |z|^4)
                    const double dx = h * (jx - kx);
                    const double r2 = dx * dx + dy * dy;
                    const double inv = -inv_pi / (r2 * r2);
                    const Complex kv((dx * dx - dy * dy) * inv, -2.0 * dx * dy * inv);
                    acc.add(kv * v[g.index(kx, ky)]);
                }
            }
            out[g.index(jx, jy)] = g.cell_area() * acc.value();
        }
    }
    return ComplexField(g, std::move(out));
}

/// DFT of the sampled kernel on the 2n x 2n padded displacement grid,
/// cached per (n, spacing).
inline const std::vector<Complex>& kernel_spectrum(const GridSpec& g) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::unique_ptr<std::vector<Complex>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(g.n, g.spacing());
    auto it = cache.find(key);
    if (it == cache.end()) {
        const int n = g.n, pad = 2 * g.n;
        const double h = g.spacing();
        auto table = std::make_unique<std::vector<Complex>>(
            static_cast<long>(pad) * pad, Complex{0.0, 0.0});
        for (int dy = -(n - 1); dy <= n - 1; ++dy) {
            const int wy = (dy + pad) % pad;
            for (int dx = -(n - 1); dx <= n - 1; ++dx) {
                const int wx = (dx + pad) % pad;
                (*table)[static_cast<long>(wy) * pad + wx] =
                    beurling_kernel(Complex(h * dx, h * dy));
            }
        }
        fft2(pad, pad, table->data(), -1);
        it = cache.emplace(key, std::move(table)).first;
    }
    return *it->second;
}

inline ComplexField apply_fft(const ComplexField& v) {
    const GridSpec& g = v.grid();
    const int n = g.n, pad = 2 * g.n;
    const std::vector<Complex>& khat = kernel_spectrum(g);
    std::vector<Complex> work(static_cast<long>(pad) * pad, Complex{0.0, 0.0});
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            work[static_cast<long>(iy) * pad + ix] = v[g.index(ix, iy)];
    fft2(pad, pad, work.data(), -1);
    for (long i = 0; i < static_cast<long>(work.size()); ++i) work[i] *= khat[i];
    fft2(pad, pad, work.data(), +1);
    const double scale = g.cell_area() / (static_cast<double>(pad) * pad);
    std::vector<Complex> out(v.size());
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            out[g.index(ix, iy)] = scale * work[static_cast<long>(iy) * pad + ix];
    return ComplexField(g, std::move(out));
}

} // namespace beurling_detail

/// Apply the Beurling transform with the chosen backend.
inline ComplexField beurling(const ComplexField& v, Backend backend) {
    require_backend_grid(v.grid(), backend);
    switch (backend) {
        case Backend::spectral: return beurling_detail::apply_spectral(v);
        case Backend::quadrature_direct: return beurling_detail::apply_direct(v);
        case Backend::quadrature_fft: return beurling_detail::apply_fft(v);
    }
    throw Error("unreachable");
}

/// Hermitian adjoint of the discrete transform, so that the duality
/// integral(phi * conj(S* psi)) = integral(S phi * conj(psi)) holds to
/// roundoff and S*S = I on mean-zero fields on the torus.
///
/// Spectral: S is diagonal in the (unitary) DFT basis, so the adjoint is the
/// conjugate multiplier zeta/conj(zeta).  (conj . S . conj is NOT the
/// adjoint there: it misses the Nyquist cross, where -k = k mod n.)
/// Quadrature: the kernel is even, so entrywise conjugation of the matrix
/// equals its conjugate transpose and conj . S . conj is the exact adjoint.
inline ComplexField beurling_adjoint(const ComplexField& g, Backend backend) {
    if (backend == Backend::spectral) {
        require_backend_grid(g.grid(), backend);
        return apply_multiplier(g, [](Complex zeta) {
            return std::conj(beurling_detail::multiplier(zeta));
        });
    }
    return conj(beurling(conj(g), backend));
}

} // namespace beurlab
