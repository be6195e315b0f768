#pragma once

// Oscillation witnesses in the style of Coifman-Rochberg-Weiss, adapted to
// grid cubes, and the certified commutator lower bounds built from them.
//
// For a cube Q with center z and side l, with w(x) = (x - z)/l and a
// unimodular phase sigma chosen so that sigma * (b - <b>_Q) = |b - <b>_Q|,
// the three pairs
//   f1 = 1_Q,       g1 = -pi w^2 sigma 1_Q
//   f2 = w 1_Q,     g2 = 2 pi w sigma 1_Q
//   f3 = w^2 1_Q,   g3 = -pi sigma 1_Q
// satisfy  integral_Q |b - <b>_Q| = sum_i integral g_i [b,S] f_i  exactly
// for the combined-kernel quadrature commutator on the same nodes: summing
// the pairs reconstructs -(pi/l^2) sigma(x) (x-y)^2, which cancels the
// kernel's (x-y)^2 algebraically, and the diagonal vanishes with b(x)-b(y).
// Because the identity is exact at the discrete level, dividing by the
// witness norms certifies a lower bound on the discrete operator norm
// without ever applying the operator.

#include "beurlab/dyadic.hpp"
#include "beurlab/kernel.hpp"
#include "beurlab/beurling.hpp"

namespace beurlab {

struct WitnessTriple {
    DyadicCube cube;
    Complex center{0.0, 0.0};
    double side = 0.0;
    Complex cube_mean{0.0, 0.0};
    double osc = 0.0;
    // cube-local arrays, row-major over the cube's cells
    std::vector<Complex> sigma;
    std::vector<Complex> f1, g1, f2, g2, f3, g3;
    double bound_const = 0.0;  ///< max over cells and pairs of |f_i| + |g_i|
};

inline WitnessTriple crw_witnesses(const ComplexField& b, const DyadicRoot& root,
                                   const DyadicCube& cube) {
    if (root.grid.periodic)
        throw BackendGridMismatch("oscillation witnesses require a bounded grid");
    if (!(b.grid() == root.grid)) throw GridMismatch("symbol and root live on different grids");
    const CubeRect rect = cube_cells(root, cube);
    const auto [cmean, osc] = mean_and_oscillation(b, root, cube);

    WitnessTriple t;
    t.cube = cube;
    t.center = cube_center(root, cube);
    t.side = root.side(cube.level);
    t.cube_mean = cmean;
    t.osc = osc;
    const long cells = rect.cells();
    t.sigma.resize(cells);
    t.f1.resize(cells);
    t.g1.resize(cells);
    t.f2.resize(cells);
    t.g2.resize(cells);
    t.f3.resize(cells);
    t.g3.resize(cells);

    long idx = 0;
    double bound = 0.0;
    for (int iy = rect.y0; iy < rect.y0 + rect.m; ++iy) {
        for (int ix = rect.x0; ix < rect.x0 + rect.m; ++ix, ++idx) {
            const Complex dev = b[b.grid().index(ix, iy)] - cmean;
            const Complex sigma =
                dev == Complex(0.0, 0.0) ? Complex(1.0, 0.0) : std::conj(dev) / std::abs(dev);
            const Complex w = (b.grid().node(ix, iy) - t.center) / t.side;
            const Complex w2 = w * w;
            t.sigma[idx] = sigma;
            t.f1[idx] = {1.0, 0.0};
            t.g1[idx] = -kPi * w2 * sigma;
            t.f2[idx] = w;
            t.g2[idx] = 2.0 * kPi * w * sigma;
            t.f3[idx] = w2;
            t.g3[idx] = -kPi * sigma;
            bound = std::max({bound, std::abs(t.f1[idx]) + std::abs(t.g1[idx]),
                              std::abs(t.f2[idx]) + std::abs(t.g2[idx]),
                              std::abs(t.f3[idx]) + std::abs(t.g3[idx])});
        }
    }
    t.bound_const = bound;
    return t;
}

namespace crw_detail {

/// The three pairings integral g_i [b,S] f_i evaluated with the cube-local
/// combined-kernel quadrature in one fused pass over cell pairs.  The inner
/// loop works on scalar arrays with 1/z^2 = conj(z^2)/|z|^4; std::complex
/// division would dominate the runtime otherwise.
inline std::array<Complex, 3> witness_pairings(const ComplexField& b, const DyadicRoot& root,
                                               const WitnessTriple& t) {
    const CubeRect rect = cube_cells(root, t.cube);
    const long cells = rect.cells();
    std::vector<double> px(cells), py(cells), bre(cells), bim(cells);
    std::vector<double> f2re(cells), f2im(cells), f3re(cells), f3im(cells);
    bool real_symbol = true;
    {
        long idx = 0;
        for (int iy = rect.y0; iy < rect.y0 + rect.m; ++iy)
            for (int ix = rect.x0; ix < rect.x0 + rect.m; ++ix, ++idx) {
                const Complex pos = b.grid().node(ix, iy);
                const Complex bv = b[b.grid().index(ix, iy)];
                px[idx] = pos.real();
                py[idx] = pos.imag();
                bre[idx] = bv.real();
                bim[idx] = bv.imag();
                if (bv.imag() != 0.0) real_symbol = false;
                f2re[idx] = t.f2[idx].real();
                f2im[idx] = t.f2[idx].imag();
                f3re[idx] = t.f3[idx].real();
                f3im[idx] = t.f3[idx].imag();
            }
    }

    KahanSumComplex acc1, acc2, acc3;
    const double inv_pi = 1.0 / kPi;
    for (long j = 0; j < cells; ++j) {
        double t0r = 0, t0i = 0, t1r = 0, t1i = 0, t2r = 0, t2i = 0;
        const double pjx = px[j], pjy = py[j];
        const double bjr = bre[j], bji = bim[j];
        auto body = [&](long k) {
            const double dx = pjx - px[k], dy = pjy - py[k];
            const double r2 = dx * dx + dy * dy;
            const double inv = inv_pi / (r2 * r2);
            // (b_j - b_k) * (-1/(pi z^2)) = (b_k - b_j) * conj(z^2)/(pi |z|^4)
            const double are = (dx * dx - dy * dy) * inv;
            const double aim = -2.0 * dx * dy * inv;
            double kr, ki;
            if (real_symbol) {
                const double w = bre[k] - bjr;
                kr = w * are;
                ki = w * aim;
            } else {
                const double wr = bre[k] - bjr, wi = bim[k] - bji;
                kr = wr * are - wi * aim;
                ki = wr * aim + wi * are;
            }
            t0r += kr;
            t0i += ki;
            t1r += kr * f2re[k] - ki * f2im[k];
            t1i += kr * f2im[k] + ki * f2re[k];
            t2r += kr * f3re[k] - ki * f3im[k];
            t2i += kr * f3im[k] + ki * f3re[k];
        };
        for (long k = 0; k < j; ++k) body(k);
        for (long k = j + 1; k < cells; ++k) body(k);
        acc1.add(t.g1[j] * Complex(t0r, t0i));
        acc2.add(t.g2[j] * Complex(t1r, t1i));
        acc3.add(t.g3[j] * Complex(t2r, t2i));
    }
    const double h2 = b.grid().cell_area();
    const double weight = h2 * h2;
    return {weight * acc1.value(), weight * acc2.value(), weight * acc3.value()};
}

} // namespace crw_detail

/// Relative residual of the discrete witness identity on one cube
/// (0 when the left side vanishes).
inline double crw_identity_residual(const ComplexField& b, const DyadicRoot& root,
                                    const DyadicCube& cube) {
    WitnessTriple t = crw_witnesses(b, root, cube);
    const CubeRect rect = cube_cells(root, cube);
    const double lhs = b.grid().cell_area() * t.osc * static_cast<double>(rect.cells());
    if (lhs == 0.0) return 0.0;
    const auto parts = crw_detail::witness_pairings(b, root, t);
    const Complex rhs = parts[0] + parts[1] + parts[2];
    return std::abs(Complex(lhs, 0.0) - rhs) / lhs;
}

struct WitnessBound {
    double value = 0.0;
    CubeRect cube;  ///< the cube attaining the supremum
};

namespace crw_detail {

/// Witness-pair norms depend only on the cube size; table per (cells, p, s).
struct WitnessNorms {
    double denom = 0.0;  ///< sum_i ||f_i||_p ||g_i||_s
};

inline WitnessNorms witness_norms(const GridSpec& grid, int m, double p, double s) {
    const double h = grid.spacing();
    const double side = m * h;
    KahanSum f2p, f3p, g1s, g2s;
    for (int iy = 0; iy < m; ++iy) {
        for (int ix = 0; ix < m; ++ix) {
            const double wx = h * (ix + 0.5) - side / 2;
            const double wy = h * (iy + 0.5) - side / 2;
            const double aw = std::sqrt(wx * wx + wy * wy) / side;
            f2p.add(std::pow(aw, p));
            f3p.add(std::pow(aw, 2.0 * p));
            g1s.add(std::pow(aw, 2.0 * s));
            g2s.add(std::pow(aw, s));
        }
    }
    const double h2 = grid.cell_area();
    const double area = h2 * m * m;
    const double nf1 = std::pow(area, 1.0 / p);
    const double nf2 = std::pow(h2 * f2p.value(), 1.0 / p);
    const double nf3 = std::pow(h2 * f3p.value(), 1.0 / p);
    const double ng1 = kPi * std::pow(h2 * g1s.value(), 1.0 / s);
    const double ng2 = 2.0 * kPi * std::pow(h2 * g2s.value(), 1.0 / s);
    const double ng3 = kPi * std::pow(area, 1.0 / s);
    return {nf1 * ng1 + nf2 * ng2 + nf3 * ng3};
}

/// sup over the cube family of  integral_Q |b - <b>_Q| / sum_i ||f_i||_p ||g_i||_s.
inline WitnessBound witness_supremum(const ComplexField& b, double p, double s) {
    PrefixSums ps(b);
    std::map<int, double> denom_by_size;
    WitnessBound best;
    const double h2 = b.grid().cell_area();
    for_each_family_cube(b.grid().n, [&](const CubeRect& q) {
        auto it = denom_by_size.find(q.m);
        if (it == denom_by_size.end())
            it = denom_by_size.emplace(q.m, witness_norms(b.grid(), q.m, p, s).denom).first;
        const double osc = cube_oscillation(b, q, ps.rect_mean(q));
        const double value = h2 * q.cells() * osc / it->second;
        if (value > best.value) {
            best.value = value;
            best.cube = q;
        }
    });
    return best;
}

} // namespace crw_detail

/// Certified lower bound on ||[b,S]||_{L^p -> L^p} from the witness identity,
/// together with the cube attaining it.
inline WitnessBound bmo_lower(const ComplexField& b, double p, Backend backend) {
    if (!(p > 1.0) || std::isinf(p))
        throw ExponentMismatch("bmo_lower: p must lie in (1, infinity)");
    if (!is_quadrature(backend))
        throw BackendGridMismatch("bmo_lower certifies against the quadrature operator");
    require_backend_grid(b.grid(), backend);
    return crw_detail::witness_supremum(b, p, p / (p - 1.0));
}

/// Certified lower bound on ||[b,S]||_{L^p -> L^q} for p < q (the fractional
/// regime; alpha = 2(1/p - 1/q)).  Diverges under refinement when alpha > 1.
inline WitnessBound holder_lower(const ComplexField& b, double p, double q, Backend backend) {
    if (!(p > 1.0) || !(q > 1.0) || std::isinf(p) || std::isinf(q))
        throw ExponentMismatch("holder_lower: exponents must lie in (1, infinity)");
    if (!(p < q)) throw ExponentMismatch("holder_lower requires p < q");
    if (!is_quadrature(backend))
        throw BackendGridMismatch("holder_lower certifies against the quadrature operator");
    require_backend_grid(b.grid(), backend);
    return crw_detail::witness_supremum(b, p, q / (q - 1.0));
}

} // namespace beurlab
