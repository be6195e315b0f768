#pragma once

// The commutator [b, S]v = b*Sv - S(bv).
//
// On the direct quadrature backend it is evaluated in the combined kernel
// form h^2 sum_k (b(x_j) - b(x_k)) K(x_j - x_k) v(x_k): the factor
// b(x) - b(y) cancels before the singular weight is ever formed, which makes
// the oscillation-witness identities exact at the discrete level and the
// constant-symbol case exactly zero.  The FFT backend evaluates the same
// matrix as b*(K*v) - K*(bv); constant symbols short-circuit to the exact
// zero field on every backend.

#include "beurlab/beurling.hpp"

namespace beurlab {

namespace commutator_detail {

inline bool is_constant(const ComplexField& b) {
    for (long i = 1; i < b.size(); ++i)
        if (b[i] != b[0]) return false;
    return true;
}

inline ComplexField combined_direct(const ComplexField& b, const ComplexField& v) {
    const GridSpec& g = b.grid();
    const int n = g.n;
    const double h = g.spacing();
    const double inv_pi = 1.0 / kPi;
    std::vector<Complex> out(b.size());
    for (int jy = 0; jy < n; ++jy) {
        for (int jx = 0; jx < n; ++jx) {
            const Complex bj = b[g.index(jx, jy)];
            KahanSumComplex acc;
            for (int ky = 0; ky < n; ++ky) {
                const double dy = h * (jy - ky);
                for (int kx = 0; kx < n; ++kx) {
                    if (kx == jx && ky == jy) continue;
                    const long k = g.index(kx, ky);
                    const double dx = h * (jx - kx);
                    const double r2 = dx * dx + dy * dy;
                    const double inv = -inv_pi / (r2 * r2);
                    const Complex kv((dx * dx - dy * dy) * inv, -2.0 * dx * dy * inv);
                    acc.add((bj - b[k]) * kv * v[k]);
                }
            }
            out[g.index(jx, jy)] = g.cell_area() * acc.value();
        }
    }
    return ComplexField(g, std::move(out));
}

} // namespace commutator_detail

inline ComplexField commutator(const ComplexField& b, const ComplexField& v, Backend backend) {
    require_same_grid(b, v);
    require_backend_grid(b.grid(), backend);
    if (commutator_detail::is_constant(b)) return ComplexField::zero(b.grid());
    if (backend == Backend::quadrature_direct) return commutator_detail::combined_direct(b, v);
    return b * beurling(v, backend) - beurling(b * v, backend);
}

/// Hermitian adjoint apply: [b,S]* g = S*(conj(b) g) - conj(b) S* g.
inline ComplexField commutator_adjoint(const ComplexField& b, const ComplexField& g,
                                       Backend backend) {
    require_same_grid(b, g);
    require_backend_grid(b.grid(), backend);
    if (commutator_detail::is_constant(b)) return ComplexField::zero(b.grid());
    ComplexField bbar = conj(b);
    return beurling_adjoint(bbar * g, backend) - bbar * beurling_adjoint(g, backend);
}

} // namespace beurlab
