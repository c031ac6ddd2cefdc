#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace singring {

// SplitMix64 finalizer; the basis of all seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Stable seed combiner.  Experiments derive per-trial generator seeds as
// hash64(base, trial, n) so results do not depend on execution order, and a
// draw splits its own seed into factor seeds with further hash64 calls.
constexpr std::uint64_t hash64(std::uint64_t seed, std::uint64_t k) {
    return mix64(seed ^ mix64(k));
}
constexpr std::uint64_t hash64(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return hash64(hash64(seed, a), b);
}

// mt19937_64 stream with hand-rolled uniform/normal draws.  The engine's
// output is fully specified by the standard; std::normal_distribution is
// not, so Box-Muller keeps streams identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));  // 1-u1 in (0,1]
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    std::complex<double> gaussian_complex() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace singring
