#pragma once

// Independent random signs indexed by (sample, cube), generated by a
// counter-based hash so the matrix is deterministic in the seed and
// independent of evaluation order.

#include <cstdint>
#include <vector>

#include "beurlab/errors.hpp"
#include "beurlab/rng.hpp"

namespace beurlab {

class SignMatrix {
public:
    SignMatrix(std::size_t n_cubes, std::uint64_t seed, int samples)
        : cubes_(n_cubes), samples_(samples), signs_(n_cubes * samples) {
        if (samples < 1) throw InvalidArgument("random_signs requires at least one sample");
        for (int s = 0; s < samples; ++s)
            for (std::size_t q = 0; q < n_cubes; ++q)
                signs_[static_cast<std::size_t>(s) * n_cubes + q] =
                    (mix_seed(seed, static_cast<std::uint64_t>(s), q) >> 63) ? 1 : -1;
    }

    int at(int sample, std::size_t cube) const {
        return signs_[static_cast<std::size_t>(sample) * cubes_ + cube];
    }
    std::size_t cubes() const { return cubes_; }
    int samples() const { return samples_; }

    /// Largest off-diagonal entry of the empirical correlation matrix
    /// (1/M) sum_s eps_Q(s) eps_Q'(s); converges to 0 at rate O(M^{-1/2}).
    double max_offdiagonal_correlation() const {
        double worst = 0.0;
        for (std::size_t a = 0; a < cubes_; ++a) {
            for (std::size_t b = a + 1; b < cubes_; ++b) {
                long acc = 0;
                for (int s = 0; s < samples_; ++s) acc += at(s, a) * at(s, b);
                worst = std::max(worst, std::abs(static_cast<double>(acc)) / samples_);
            }
        }
        return worst;
    }

private:
    std::size_t cubes_;
    int samples_;
    std::vector<std::int8_t> signs_;
};

inline SignMatrix random_signs(std::size_t n_cubes, std::uint64_t seed, int samples) {
    return SignMatrix(n_cubes, seed, samples);
}

} // namespace beurlab
