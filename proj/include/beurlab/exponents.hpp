#pragma once

#include <cmath>
#include <optional>

#include "beurlab/calculus.hpp"
#include "beurlab/errors.hpp"

namespace beurlab {

/// Exponent bookkeeping for the commutator problem in dimension d = 2.
///
/// r is defined by 1/r = 1/q - 1/p when p > q, the infinite sentinel when
/// p = q (the BMO regime), and is absent when p < q.  alpha = 2*(1/p - 1/q)
/// is present only when p < q.  1/p_star = (1/p - 1/2)_+ with the infinite
/// sentinel when p >= 2.
struct ExponentTriple {
    double p = 0.0, q = 0.0;
    double p_dual = 0.0, q_dual = 0.0;
    std::optional<double> r, r_dual;
    double p_star = 0.0;
    std::optional<double> alpha;
};

inline double conjugate_exponent(double p) {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return kInfiniteExponent;
    return p / (p - 1.0);
}

inline ExponentTriple exponents(double p, double q) {
    if (!(p > 1.0) || std::isinf(p) || !(q > 1.0) || std::isinf(q))
        throw ExponentMismatch("exponents must lie in (1, infinity)");
    ExponentTriple e;
    e.p = p;
    e.q = q;
    e.p_dual = conjugate_exponent(p);
    e.q_dual = conjugate_exponent(q);
    if (p > q) {
        e.r = 1.0 / (1.0 / q - 1.0 / p);
        e.r_dual = conjugate_exponent(*e.r);
    } else if (p == q) {
        e.r = kInfiniteExponent;
        e.r_dual = 1.0;
    }
    const double inv_p_star = 1.0 / p - 0.5;
    e.p_star = inv_p_star > 0.0 ? 1.0 / inv_p_star : kInfiniteExponent;
    if (p < q) e.alpha = 2.0 * (1.0 / p - 1.0 / q);
    return e;
}

/// Exponent map of the Jacobian problem: datum in L^p corresponds to the
/// commutator acting L^{2p} -> L^{(2p)'}.  p = 1 gives the L^2 -> L^2 case.
inline std::pair<double, double> jacobian_exponents(double p) {
    if (!(p >= 1.0) || std::isinf(p))
        throw ExponentMismatch("jacobian exponent must lie in [1, infinity)");
    const double two_p = 2.0 * p;
    return {two_p, conjugate_exponent(two_p)};
}

} // namespace beurlab
