#pragma once

// Deterministic, platform-independent random number generation.  The lab's
// reproducibility contract (same seed => byte-identical reports, independent
// of scheduling) rules out distribution objects with unspecified algorithms,
// so everything is built on splitmix64.

#include <cmath>
#include <cstdint>

namespace beurlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stateless mix of a seed with stream/counter indices; used to derive
/// independent substreams (per restart, per sample, per cube).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0xD1B54A32D192ED03ull * (a + 1);
    (void)splitmix64(s);
    s ^= 0x8CB92BA72F3D8DD7ull * (b + 1);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // burn-in decorrelates small consecutive seeds
        (void)splitmix64(state_);
        (void)splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846264338327950288 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Fair sign in {-1, +1}.
    int sign() { return (next_u64() >> 63) ? 1 : -1; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace beurlab
