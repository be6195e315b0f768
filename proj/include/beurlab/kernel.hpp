#pragma once

#include <functional>

#include "beurlab/field.hpp"
#include "beurlab/rng.hpp"

namespace beurlab {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Beurling kernel K(z) = -1/(pi z^2), with the principal-value convention
/// K(0) = 0 on the diagonal.
inline Complex beurling_kernel(Complex z) {
    if (z == Complex(0.0, 0.0)) return {0.0, 0.0};
    return -1.0 / (kPi * z * z);
}

/// A convolution-type kernel together with its size bound c_upper
/// (|K(x,y)| <= c_upper/|x-y|^2) and non-degeneracy constant c_lower
/// (for every y, r there is x with |x-y| ~ r and |K(x,y)| >= c_lower/|x-y|^2).
/// For the Beurling kernel both constants are attained with equality at 1/pi.
struct KernelSpec {
    double c_upper = 0.0;
    double c_lower = 0.0;
    std::function<Complex(Complex, Complex)> kernel;

    static KernelSpec beurling() {
        return {1.0 / kPi, 1.0 / kPi,
                [](Complex x, Complex y) { return beurling_kernel(x - y); }};
    }

    static KernelSpec scaled_beurling(double factor) {
        return {factor / kPi, factor / kPi,
                [factor](Complex x, Complex y) { return factor * beurling_kernel(x - y); }};
    }

    static KernelSpec zero() {
        return {0.0, 0.0, [](Complex, Complex) { return Complex(0.0, 0.0); }};
    }
};

struct KernelBoundsReport {
    double min_ratio = 0.0;  ///< min over trials of |K(x,y)| |x-y|^2
    double max_ratio = 0.0;  ///< max over trials of the same
    bool size_bound_ok = false;
    bool nondegenerate = false;
    int trials = 0;
};

/// Sample random positions y and scales r, pick x on the circle |x-y| = r,
/// and report the range of |K(x,y)| |x-y|^2 against the declared constants.
inline KernelBoundsReport kernel_bounds_check(const KernelSpec& spec, int trials,
                                              std::uint64_t seed = 1) {
    if (trials < 1) throw InvalidArgument("kernel_bounds_check requires trials >= 1");
    Rng rng(seed);
    KernelBoundsReport rep;
    rep.trials = trials;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Complex y(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0));
        const double r = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const Complex x = y + r * Complex(std::cos(theta), std::sin(theta));
        const double ratio = std::abs(spec.kernel(x, y)) * std::norm(x - y);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    rep.min_ratio = lo;
    rep.max_ratio = hi;
    rep.size_bound_ok = hi <= spec.c_upper * (1.0 + 1e-12);
    rep.nondegenerate = spec.c_lower > 0.0 && lo >= spec.c_lower * (1.0 - 1e-12);
    return rep;
}

} // namespace beurlab
