#ifndef LWC_RANDOM_HPP
#define LWC_RANDOM_HPP

#include <cstdint>
#include <cmath>
#include <random>

namespace lwc {

/**
 * SplitMix64 step. Used to derive independent child seeds from a master seed
 * and a counter, so that seeds do not depend on call order.
 */
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return splitmix64(splitmix64(master) ^ splitmix64(counter + 0x5851f42d4c957f2dULL));
}

/**
 * Portable generator: std::mt19937_64 (fully specified by the standard) with
 * hand-written bounded-integer and unit-real draws, since the standard
 * distributions are implementation-defined.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound), rejection sampling.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    long long between(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace lwc

#endif
