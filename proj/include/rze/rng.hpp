#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rze {

/// Named sub-streams derived from one master seed. Positions and marks use
/// separate streams so that dropping the marks of a marked sample leaves the
/// unmarked sample bit-for-bit.
enum class Stream : std::uint64_t {
    points = 0x706f696e7473ULL,
    marks = 0x6d61726b73ULL,
    extension = 0x657874656e64ULL,
    trials = 0x747269616c73ULL,
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) noexcept {
    std::uint64_t h = detail::splitmix64(master);
    h = detail::splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return detail::splitmix64(h ^ detail::splitmix64(index));
}

/// Random source with fully specified output: mt19937_64 is pinned by the
/// standard, and every variate below is derived from its raw 64-bit words
/// (the std:: distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

    /// Poisson variate. Inversion for small means, Hoermann's PTRS
    /// transformed rejection otherwise.
    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) {
            return 0;
        }
        if (mean < 10.0) {
            return poisson_inversion(mean);
        }
        return poisson_ptrs(mean);
    }

private:
    std::uint64_t poisson_inversion(double mean) {
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

    std::uint64_t poisson_ptrs(double mean) {
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = uniform() - 0.5;
            const double v = uniform();
            const double us = 0.5 - std::abs(u);
            const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= vr) {
                return static_cast<std::uint64_t>(k);
            }
            if (k < 0.0 || (us < 0.013 && v > us)) {
                continue;
            }
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                -mean + k * loglam - std::lgamma(k + 1.0)) {
                return static_cast<std::uint64_t>(k);
            }
        }
    }

    std::mt19937_64 engine_;
};

}  // namespace rze
