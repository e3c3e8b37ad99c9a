// Counter-based splittable random number generator.
//
// Each (seed, stream) pair selects an independent stream; the n-th output is a
// pure function of (seed, stream, n), so parallel replicas are bitwise
// reproducible regardless of scheduling.  The mixer is two rounds of the
// splitmix64 finalizer over a keyed counter.

#pragma once

#include <cmath>
#include <cstdint>

namespace hslpp {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ 0x6a09e667f3bcc909ULL) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 1)) {}

    /// Next raw 64-bit output.
    std::uint64_t next_u64() {
        std::uint64_t v = key_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
        return mix(mix(v) ^ 0x94d049bb133111ebULL);
    }

    /// Uniform double in the open interval (0,1).
    double next_unit() {
        // 53 random bits; map 0 to the smallest representable value so that
        // logarithms of the output are always finite.
        std::uint64_t bits = next_u64() >> 11;
        if (bits == 0) bits = 1;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

    /// Geometric variable with P(X = k) = alpha^k (1 - alpha), k >= 0.
    /// alpha = 0 is the point mass at 0.
    long long next_geometric(double alpha) {
        if (alpha <= 0.0) {
            next_u64();  // keep the counter advance uniform across branches
            return 0;
        }
        return static_cast<long long>(std::floor(std::log(next_unit()) / std::log(alpha)));
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace hslpp
