#pragma once

// Mean-oscillation machinery over grid-aligned cube families, distance to
// constants in L^r, and a smooth-maximal-function proxy for the Hardy space
// H^1.
//
// The cube family behind every supremum is the dyadic family of the full
// grid together with its half-shifted copies at each scale: a bounded family
// with good covering properties.  Suprema over it are reported constants,
// not certified norms.

#include <functional>

#include "beurlab/calculus.hpp"

namespace beurlab {

/// Cell-aligned square: m-by-m grid cells whose lower-left cell is (x0, y0).
struct CubeRect {
    int x0 = 0, y0 = 0, m = 0;
    long cells() const { return static_cast<long>(m) * m; }
};

/// Prefix-sum table for O(1) rectangle sums of a field.
class PrefixSums {
public:
    explicit PrefixSums(const ComplexField& f) : n_(f.grid().n), table_((n_ + 1) * (n_ + 1)) {
        for (int iy = 0; iy < n_; ++iy) {
            Complex row{0.0, 0.0};
            for (int ix = 0; ix < n_; ++ix) {
                row += f[f.grid().index(ix, iy)];
                table_[at(ix + 1, iy + 1)] = table_[at(ix + 1, iy)] + row;
            }
        }
    }

    Complex rect_sum(const CubeRect& q) const {
        return table_[at(q.x0 + q.m, q.y0 + q.m)] - table_[at(q.x0, q.y0 + q.m)] -
               table_[at(q.x0 + q.m, q.y0)] + table_[at(q.x0, q.y0)];
    }

    Complex rect_mean(const CubeRect& q) const {
        return rect_sum(q) / static_cast<double>(q.cells());
    }

private:
    long at(int x, int y) const { return static_cast<long>(y) * (n_ + 1) + x; }
    int n_;
    std::vector<Complex> table_;
};

/// Mean oscillation of b over a cube: average of |b - <b>_Q|.
inline double cube_oscillation(const ComplexField& b, const CubeRect& q, Complex cube_mean) {
    KahanSum acc;
    for (int iy = q.y0; iy < q.y0 + q.m; ++iy)
        for (int ix = q.x0; ix < q.x0 + q.m; ++ix)
            acc.add(std::abs(b[b.grid().index(ix, iy)] - cube_mean));
    return acc.value() / static_cast<double>(q.cells());
}

/// Visit the dyadic cubes (side >= 2 cells) of the full grid plus their
/// half-shifted copies at every scale.
template <class F>
void for_each_family_cube(int n, F&& visit) {
    for (int m = n; m >= 2; m /= 2) {
        const int offsets[2] = {0, m / 2};
        for (int oy : offsets)
            for (int ox : offsets)
                for (int y0 = oy; y0 + m <= n; y0 += m)
                    for (int x0 = ox; x0 + m <= n; x0 += m) visit(CubeRect{x0, y0, m});
    }
}

/// sup over the cube family of the mean oscillation; zero iff b is constant.
inline double bmo_norm(const ComplexField& b) {
    PrefixSums ps(b);
    double sup = 0.0;
    for_each_family_cube(b.grid().n, [&](const CubeRect& q) {
        sup = std::max(sup, cube_oscillation(b, q, ps.rect_mean(q)));
    });
    return sup;
}

/// Hoelder oscillation constant: sup over cubes of (mean oscillation)/r^alpha
/// with r = half the cube side length.
inline double holder_osc(const ComplexField& b, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("holder_osc: alpha must lie in (0, 1]");
    PrefixSums ps(b);
    const double h = b.grid().spacing();
    double sup = 0.0;
    for_each_family_cube(b.grid().n, [&](const CubeRect& q) {
        const double r = 0.5 * q.m * h;
        sup = std::max(sup, cube_oscillation(b, q, ps.rect_mean(q)) / std::pow(r, alpha));
    });
    return sup;
}

/// Limit of cube means over a nested centered ladder, Richardson-extrapolated
/// in 1/|Q|; the Cauchy increments of the raw means are reported alongside.
struct MeanLimit {
    Complex c{0.0, 0.0};
    std::vector<Complex> ladder_means;
    std::vector<double> increments;
};

inline MeanLimit mean_limit_constant(const ComplexField& b, const std::vector<CubeRect>& ladder) {
    if (ladder.size() < 2) throw InvalidArgument("mean_limit_constant requires >= 2 ladder cubes");
    PrefixSums ps(b);
    MeanLimit out;
    for (const CubeRect& q : ladder) out.ladder_means.push_back(ps.rect_mean(q));
    for (size_t i = 1; i < out.ladder_means.size(); ++i)
        out.increments.push_back(std::abs(out.ladder_means[i] - out.ladder_means[i - 1]));
    // means ~ c + A/|Q|: eliminate A from the two largest cubes
    const size_t k = out.ladder_means.size() - 1;
    const double area_ratio = static_cast<double>(ladder[k].cells()) / ladder[k - 1].cells();
    out.c = (area_ratio * out.ladder_means[k] - out.ladder_means[k - 1]) / (area_ratio - 1.0);
    return out;
}

/// Default centered ladder: sides n/8, n/4, n/2, n.
inline std::vector<CubeRect> centered_ladder(int n) {
    std::vector<CubeRect> out;
    for (int m = std::max(2, n / 8); m <= n; m *= 2) out.push_back({(n - m) / 2, (n - m) / 2, m});
    return out;
}

struct ConstantFit {
    Complex c{0.0, 0.0};
    double dist = 0.0;
    MeanLimit limit;
};

/// Best constant approximation in L^r: c is the extrapolated limit of the
/// centered cube means, dist = ||b - c||_r.
inline ConstantFit distance_to_constants_lr(const ComplexField& b, double r) {
    if (b.grid().periodic)
        throw BackendGridMismatch("distance_to_constants_lr requires a bounded grid");
    if (!(r > 1.0) || std::isinf(r)) throw ExponentMismatch("distance_to_constants_lr: r must lie in (1, infinity)");
    ConstantFit fit;
    fit.limit = mean_limit_constant(b, centered_ladder(b.grid().n));
    fit.c = fit.limit.c;
    std::vector<Complex> diff(b.size());
    for (long i = 0; i < b.size(); ++i) diff[i] = b[i] - fit.c;
    fit.dist = lp_norm(ComplexField(b.grid(), std::move(diff)), r);
    return fit;
}

/// Gaussian smoothing at scale t (unit-mass mollifier).
inline ComplexField gaussian_smooth(const ComplexField& f, double t) {
    if (f.grid().periodic) {
        const double quarter_t2 = 0.25 * t * t;
        return apply_multiplier(
            f, [quarter_t2](Complex zeta) { return std::exp(-quarter_t2 * std::norm(zeta)); });
    }
    const GridSpec& g = f.grid();
    const int n = g.n, pad = 2 * n;
    const double h = g.spacing();
    std::vector<Complex> kernel(static_cast<long>(pad) * pad, Complex{0.0, 0.0});
    KahanSum mass;
    for (int dy = -(n - 1); dy <= n - 1; ++dy)
        for (int dx = -(n - 1); dx <= n - 1; ++dx) {
            const double w = std::exp(-(dx * dx + dy * dy) * h * h / (t * t));
            kernel[static_cast<long>((dy + pad) % pad) * pad + (dx + pad) % pad] = w;
            mass.add(w);
        }
    const double norm = 1.0 / (mass.value() * g.cell_area());
    for (Complex& z : kernel) z *= norm;
    fft2(pad, pad, kernel.data(), -1);
    std::vector<Complex> work(static_cast<long>(pad) * pad, Complex{0.0, 0.0});
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) work[static_cast<long>(iy) * pad + ix] = f[g.index(ix, iy)];
    fft2(pad, pad, work.data(), -1);
    for (long i = 0; i < static_cast<long>(work.size()); ++i) work[i] *= kernel[i];
    fft2(pad, pad, work.data(), +1);
    const double scale = g.cell_area() / (static_cast<double>(pad) * pad);
    std::vector<Complex> out(f.size());
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            out[g.index(ix, iy)] = scale * work[static_cast<long>(iy) * pad + ix];
    return ComplexField(g, std::move(out));
}

/// Smooth-maximal-function proxy for the H^1 norm of a real-valued field:
/// L^1 norm of sup_k |phi_{t_k} * f| over dyadic scales t_k = L * 2^{-k},
/// k = 0 .. log2(n) - 2 (or the first `num_scales` of them).  A desk-scale
/// stand-in, not a certified Hardy-space norm.
inline double h1_proxy(const ComplexField& f, int num_scales = -1) {
    double max_imag = 0.0;
    for (long i = 0; i < f.size(); ++i) max_imag = std::max(max_imag, std::abs(f[i].imag()));
    if (max_imag > 1e-12 * (1.0 + max_abs(f)))
        throw InvalidArgument("h1_proxy requires a real-valued field");
    const int n = f.grid().n;
    int levels = static_cast<int>(std::round(std::log2(n))) - 1;  // k = 0 .. log2(n)-2
    if (num_scales > 0) levels = std::min(levels, num_scales);
    std::vector<double> sup(f.size(), 0.0);
    for (int k = 0; k < levels; ++k) {
        const double t = f.grid().length * std::pow(2.0, -k);
        ComplexField smooth = gaussian_smooth(f, t);
        for (long i = 0; i < f.size(); ++i) sup[i] = std::max(sup[i], std::abs(smooth[i]));
    }
    KahanSum acc;
    for (double s : sup) acc.add(s);
    return f.grid().cell_area() * acc.value();
}

} // namespace beurlab
