#pragma once

// Operator-norm estimation for the commutator [b, S] : L^p -> L^q.
//
// Estimation is lower-bound-only, by witnesses: every reported value is a
// realized Rayleigh-type ratio ||[b,S]v||_q / ||v||_p and therefore a
// certified lower bound for the discrete operator norm.  The search runs
// random restarts followed by a nonlinear power iteration through the L^p /
// L^q duality maps.  The only upper-bound-flavoured quantity is the Hoelder
// envelope ||b||_r (C_p + C_q), a sanity envelope built from empirically
// probed bounds C_s on ||S||_{L^s -> L^s}.

#include "beurlab/commutator.hpp"
#include "beurlab/random_fields.hpp"

namespace beurlab {

struct OpNormEstimate {
    double value = 0.0;          ///< certified lower bound (best realized ratio)
    ComplexField witness_v;      ///< the input realizing it, ||v||_p = 1
    double p = 0.0, q = 0.0;
    int iterations = 0;          ///< total ascent steps taken
    int restarts = 0;
};

namespace opnorm_detail {

/// Duality map of L^s: w -> |w|^{s-1} sgn(w), defined up to scaling.  The
/// input is pre-normalized in sup norm so that the powers stay in range.
inline ComplexField duality_map(const ComplexField& w, double s) {
    const double m = max_abs(w);
    if (m == 0.0) return ComplexField::zero(w.grid());
    std::vector<Complex> out(w.size());
    for (long i = 0; i < w.size(); ++i) {
        const double a = std::abs(w[i]) / m;
        out[i] = a > 0.0 ? std::pow(a, s - 1.0) * (w[i] / std::abs(w[i])) : Complex{0.0, 0.0};
    }
    return ComplexField(w.grid(), std::move(out));
}

inline ComplexField normalize_p(const ComplexField& v, double p) {
    const double n = lp_norm(v, p);
    if (n == 0.0) return v;
    return Complex(1.0 / n, 0.0) * v;
}

/// Deterministic structured probes mixed into the restart pool.
inline std::vector<ComplexField> structured_probes(const GridSpec& grid) {
    std::vector<ComplexField> probes;
    if (grid.periodic) {
        const double k0 = 2.0 * kPi / grid.length;
        for (auto [k1, k2] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 1}})
            probes.push_back(ComplexField::sample(grid, [=](Complex z) {
                return std::exp(Complex(0.0, k0 * (k1 * z.real() + k2 * z.imag())));
            }));
    } else {
        const Complex c0 = grid.origin + Complex(grid.length / 2, grid.length / 2);
        for (double s : {0.1, 0.3}) {
            const double w = s * grid.length;
            probes.push_back(ComplexField::sample(grid, [=](Complex z) {
                return Complex(std::exp(-std::norm(z - c0) / (w * w)), 0.0);
            }));
        }
    }
    return probes;
}

} // namespace opnorm_detail

/// Certified lower bound on ||[b,S]||_{L^p -> L^q} by random restarts plus
/// duality-map ascent; deterministic for a fixed seed.
inline OpNormEstimate opnorm_lower(const ComplexField& b, double p, double q, Backend backend,
                                   int restarts, std::uint64_t seed, int max_steps = 30,
                                   double rel_improvement_stop = 1e-3) {
    if (!(p > 1.0) || !(q > 1.0) || std::isinf(p) || std::isinf(q))
        throw ExponentMismatch("opnorm_lower: exponents must lie in (1, infinity)");
    if (restarts < 1) throw InvalidArgument("opnorm_lower: search budget must be >= 1 restart");
    require_backend_grid(b.grid(), backend);

    const double p_dual = p / (p - 1.0);
    OpNormEstimate best{0.0, ComplexField::zero(b.grid()), p, q, 0, restarts};

    std::vector<ComplexField> starts = opnorm_detail::structured_probes(b.grid());
    for (int rs = 0; rs < restarts; ++rs)
        starts.push_back(random_field(b.grid(), mix_seed(seed, rs)));

    for (const ComplexField& start : starts) {
        ComplexField v = opnorm_detail::normalize_p(start, p);
        if (lp_norm(v, p) == 0.0) continue;
        double prev = 0.0;
        for (int step = 0; step < max_steps; ++step) {
            ComplexField w = commutator(b, v, backend);
            const double ratio = lp_norm(w, q);
            ++best.iterations;
            if (ratio > best.value) {
                best.value = ratio;
                best.witness_v = v;
            }
            if (ratio == 0.0) break;
            if (step > 0 && ratio - prev < rel_improvement_stop * ratio) break;
            prev = ratio;
            ComplexField z = commutator_adjoint(b, opnorm_detail::duality_map(w, q), backend);
            if (max_abs(z) == 0.0) break;
            v = opnorm_detail::normalize_p(opnorm_detail::duality_map(z, p_dual), p);
        }
    }
    return best;
}

/// Empirical bound on ||S||_{L^s -> L^s} from a fixed probe set.
inline double beurling_norm_probe(const GridSpec& grid, double s, Backend backend,
                                  std::uint64_t seed = 7, int probes = 12) {
    double best = 0.0;
    std::vector<ComplexField> pool = opnorm_detail::structured_probes(grid);
    for (int i = 0; i < probes; ++i) pool.push_back(random_field(grid, mix_seed(seed, 100 + i)));
    for (const ComplexField& phi : pool) {
        const double denom = lp_norm(phi, s);
        if (denom == 0.0) continue;
        best = std::max(best, lp_norm(beurling(phi, backend), s) / denom);
    }
    return best;
}

/// Hoelder-split upper envelope for p > q, 1/q = 1/r + 1/p:
/// ||b||_r * (C_p + C_q).  A sanity envelope, not a certified norm.
inline double opnorm_upper_split(const ComplexField& b, double p, double q, double r,
                                 Backend backend) {
    if (!(p > 1.0) || !(q > 1.0) || std::isinf(p) || std::isinf(q))
        throw ExponentMismatch("opnorm_upper_split: exponents must lie in (1, infinity)");
    if (!(p > q)) throw ExponentMismatch("opnorm_upper_split requires p > q");
    if (std::abs(1.0 / q - (1.0 / r + 1.0 / p)) > 1e-12)
        throw ExponentMismatch("opnorm_upper_split requires 1/q = 1/r + 1/p");
    require_backend_grid(b.grid(), backend);
    const double norm_b = lp_norm(b, r);
    if (norm_b == 0.0) return 0.0;
    const double cp = beurling_norm_probe(b.grid(), p, backend);
    const double cq = beurling_norm_probe(b.grid(), q, backend);
    return norm_b * (cp + cq);
}

} // namespace beurlab
