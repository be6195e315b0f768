#pragma once

// Integration, Lp norms and complex derivative calculus on sampled fields.
//
// Derivatives dispatch on the grid: periodic grids use exact spectral
// differentiation, bounded grids use fourth-order centered differences with
// one-sided fourth-order closures at the edges.  The Wirtinger pair is
//   d     = (d/dx1 - i d/dx2)/2,   symbol (i/2)*conj(zeta)
//   d_bar = (d/dx1 + i d/dx2)/2,   symbol (i/2)*zeta
// with zeta = xi1 + i*xi2.

#include <cmath>
#include <limits>

#include "beurlab/fft.hpp"

namespace beurlab {

inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

/// Kahan-compensated accumulator; real part and imaginary part are
/// compensated separately.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanSumComplex {
public:
    void add(Complex z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    Complex value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_, im_;
};

/// Riemann sum h^2 * sum of samples; exact for trigonometric polynomials
/// below Nyquist on the torus.
inline Complex integrate(const ComplexField& f) {
    KahanSumComplex acc;
    for (long i = 0; i < f.size(); ++i) acc.add(f[i]);
    return f.grid().cell_area() * acc.value();
}

inline Complex mean(const ComplexField& f) {
    KahanSumComplex acc;
    for (long i = 0; i < f.size(); ++i) acc.add(f[i]);
    return acc.value() / static_cast<double>(f.size());
}

/// (h^2 sum |f|^p)^{1/p}; max norm for p = infinity. Rejects p < 1.
inline double lp_norm(const ComplexField& f, double p) {
    if (std::isinf(p)) return max_abs(f);
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm requires p >= 1");
    KahanSum acc;
    if (p == 1.0) {
        for (long i = 0; i < f.size(); ++i) acc.add(std::abs(f[i]));
    } else if (p == 2.0) {
        for (long i = 0; i < f.size(); ++i) acc.add(std::norm(f[i]));
    } else {
        for (long i = 0; i < f.size(); ++i) acc.add(std::pow(std::abs(f[i]), p));
    }
    return std::pow(f.grid().cell_area() * acc.value(), 1.0 / p);
}

/// Bilinear pairing h^2 * sum f*g (no conjugation).
inline Complex pair_bilinear(const ComplexField& f, const ComplexField& g) {
    require_same_grid(f, g);
    KahanSumComplex acc;
    for (long i = 0; i < f.size(); ++i) acc.add(f[i] * g[i]);
    return f.grid().cell_area() * acc.value();
}

/// Sesquilinear inner product h^2 * sum f*conj(g).
inline Complex inner(const ComplexField& f, const ComplexField& g) {
    require_same_grid(f, g);
    KahanSumComplex acc;
    for (long i = 0; i < f.size(); ++i) acc.add(f[i] * std::conj(g[i]));
    return f.grid().cell_area() * acc.value();
}

namespace fd_detail {

// Fourth-order finite-difference derivative along one axis with one-sided
// closures; stride walks the chosen axis.
inline void differentiate_line(const Complex* in, Complex* out, int n, long stride, double h) {
    const double s = 1.0 / (12.0 * h);
    auto v = [&](int i) { return in[stride * i]; };
    out[0] = s * (-25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4));
    out[stride] = s * (-3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4));
    for (int i = 2; i < n - 2; ++i)
        out[stride * i] = s * (v(i - 2) - 8.0 * v(i - 1) + 8.0 * v(i + 1) - v(i + 2));
    out[stride * (n - 2)] =
        s * (3.0 * v(n - 1) + 10.0 * v(n - 2) - 18.0 * v(n - 3) + 6.0 * v(n - 4) - v(n - 5));
    out[stride * (n - 1)] =
        s * (25.0 * v(n - 1) - 48.0 * v(n - 2) + 36.0 * v(n - 3) - 16.0 * v(n - 4) + 3.0 * v(n - 5));
}

} // namespace fd_detail

/// Partial derivative along axis (0 = x1, 1 = x2).
inline ComplexField partial(const ComplexField& f, int axis) {
    if (axis != 0 && axis != 1) throw InvalidArgument("axis must be 0 or 1");
    if (f.grid().periodic) {
        return apply_multiplier(f, [axis](Complex zeta) {
            const double xi = axis == 0 ? zeta.real() : zeta.imag();
            return Complex(0.0, xi);
        });
    }
    const int n = f.grid().n;
    const double h = f.grid().spacing();
    std::vector<Complex> out(f.size());
    if (axis == 0) {
        for (int iy = 0; iy < n; ++iy)
            fd_detail::differentiate_line(f.samples().data() + static_cast<long>(iy) * n,
                                          out.data() + static_cast<long>(iy) * n, n, 1, h);
    } else {
        for (int ix = 0; ix < n; ++ix)
            fd_detail::differentiate_line(f.samples().data() + ix, out.data() + ix, n, n, h);
    }
    return ComplexField(f.grid(), std::move(out));
}

/// Wirtinger derivative d = (D1 - i D2)/2.
inline ComplexField d(const ComplexField& f) {
    if (f.grid().periodic)
        return apply_multiplier(
            f, [](Complex zeta) { return Complex(0.0, 0.5) * std::conj(zeta); });
    ComplexField d1 = partial(f, 0), d2 = partial(f, 1);
    return Complex(0.5, 0.0) * d1 - Complex(0.0, 0.5) * d2;
}

/// Conjugate Wirtinger derivative d_bar = (D1 + i D2)/2.
inline ComplexField d_bar(const ComplexField& f) {
    if (f.grid().periodic)
        return apply_multiplier(f, [](Complex zeta) { return Complex(0.0, 0.5) * zeta; });
    ComplexField d1 = partial(f, 0), d2 = partial(f, 1);
    return Complex(0.5, 0.0) * d1 + Complex(0.0, 0.5) * d2;
}

/// Invert v = d_bar(h) on the torus.  Requires the zero Fourier mode of v to
/// vanish (|mean| <= 1e-10 * ||v||_2); the result is gauge-fixed to zero mean.
inline ComplexField solve_dbar(const ComplexField& v) {
    if (!v.grid().periodic) throw BackendGridMismatch("solve_dbar requires a periodic grid");
    const double norm2 = lp_norm(v, 2.0);
    if (std::abs(mean(v)) > 1e-10 * norm2 && norm2 > 0.0)
        throw NonZeroMean("datum has a nonvanishing mean: not a d_bar image on the torus");
    return apply_multiplier(v, [](Complex zeta) {
        if (zeta == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
        return 1.0 / (Complex(0.0, 0.5) * zeta);
    });
}

/// sqrt(||D1 f||_2^2 + ||D2 f||_2^2).
inline double gradient_l2(const ComplexField& f) {
    const double a = lp_norm(partial(f, 0), 2.0);
    const double b = lp_norm(partial(f, 1), 2.0);
    return std::sqrt(a * a + b * b);
}

/// max over nodes of the Frobenius norm of the (complex) gradient.
inline double gradient_max(const ComplexField& f) {
    ComplexField d1 = partial(f, 0), d2 = partial(f, 1);
    double m = 0.0;
    for (long i = 0; i < f.size(); ++i)
        m = std::max(m, std::sqrt(std::norm(d1[i]) + std::norm(d2[i])));
    return m;
}

} // namespace beurlab
